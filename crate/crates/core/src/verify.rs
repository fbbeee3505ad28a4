//! Named invariant checks grouped into runnable suites.
//!
//! Each check compares a computed residual against its tolerance; exact
//! integer identities report residual 0 or 1 with tolerance 0. Suites are
//! deterministic: same configuration, same rows, same values.

use crate::forms::{
    build_i, build_j, build_jt, cartan_operator, inverse, k_operator, kt_operator, projector,
    variation_norms,
};
use crate::geometry::{adjacency_from_geometry, critical_points, HessianSignature};
use crate::measure::{
    eta_integer_relation_holds, eta_u_half_residual, fourier_transport, integration_residual,
    xi_atoms,
};
use crate::monodromy::{
    coxeter, coxeter_factored, preserves_intersection, sigma, word_order, WordOrder,
};
use crate::quiver::{build_quiver, CycleClass, Family, QuiverSpec};
use crate::spectra::{
    coxeter_eigenvalue_multiset_residual, coxeter_number, coxeter_pairing_check, eigendecompose,
    empirical_theta_distribution, finite_type_spectrum, ks_after_atom_removal, theta_to_lambda,
};
use crate::{Real, Result};

const PI: f64 = std::f64::consts::PI;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub residual: Real,
    pub tolerance: Real,
    pub passed: bool,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, residual: Real, tolerance: Real) -> Self {
        CheckResult {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }

    /// An exact (integer or structural) identity: residual 1.0 means failed.
    pub fn exact(name: impl Into<String>, holds: bool) -> Self {
        CheckResult {
            name: name.into(),
            residual: if holds { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: holds,
        }
    }
}

/// Configuration shared by the suites.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub family: Family,
    pub size: usize,
    pub degree: u32,
    pub n_max: usize,
}

fn quiver(cfg: &SuiteConfig) -> Result<QuiverSpec> {
    build_quiver(cfg.family, cfg.size)
}

/// Critical point refinement, classification, and the geometric route to
/// the quiver.
pub fn geometry_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let family = cfg.family;
    let n_max = cfg.n_max;
    let pts = critical_points(family, n_max)?;
    let mut node_err = 0.0_f64;
    let mut peak_err = 0.0_f64;
    let mut value_err = 0.0_f64;
    let mut grad = 0.0_f64;
    let mut classes_ok = true;
    for p in &pts {
        if p.x > 0.0 {
            let n: Real = p.label.parse::<usize>().map(|v| v as Real).unwrap_or(0.0);
            let seed = match p.class {
                CycleClass::C0 => (n * PI).powi(2),
                CycleClass::C1 => ((n - 0.5) * PI).powi(2),
            };
            let err = (p.x - seed).abs() / seed;
            match p.class {
                CycleClass::C0 => node_err = node_err.max(err),
                CycleClass::C1 => peak_err = peak_err.max(err),
            }
        }
        let target = match p.class {
            CycleClass::C0 => 0.0,
            CycleClass::C1 => 1.0,
        };
        value_err = value_err.max((p.critical_value - target).abs());
        grad = grad.max(p.grad_norm);
        let expected = match p.class {
            CycleClass::C0 => HessianSignature::Indefinite,
            CycleClass::C1 => HessianSignature::NegativeDefinite,
        };
        classes_ok &= p.hessian == expected;
    }
    let geo = adjacency_from_geometry(family, n_max)?;
    let combinatorial = build_quiver(family, geo.len())?;
    Ok(vec![
        CheckResult::new("node_location_relative_error", node_err, 1e-9),
        CheckResult::new("peak_location_relative_error", peak_err, 1e-9),
        CheckResult::new("critical_value_error", value_err, 1e-10),
        CheckResult::new("gradient_norm_at_critical_points", grad, 1e-10),
        CheckResult::exact("hessian_signature_matches_class", classes_ok),
        CheckResult::exact(
            "geometric_adjacency_matches_combinatorial",
            geo == combinatorial,
        ),
    ])
}

/// Exact identities of the form operators plus the variation norm bound.
pub fn forms_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let q = quiver(cfg)?;
    let j = build_j(&q);
    let jt = build_jt(&q);
    let k = k_operator(&q).matrix;
    let kt = kt_operator(&q).matrix;
    let mut out = vec![
        CheckResult::exact("k_squared_zero", k.matmul(&k).is_zero()),
        CheckResult::exact("kt_squared_zero", kt.matmul(&kt).is_zero()),
        CheckResult::exact(
            "unipotent_inverse_two_sided",
            inverse(&j)?.matrix.matmul(&j.matrix).is_identity()
                && j.matrix.matmul(&inverse(&j)?.matrix).is_identity()
                && jt.matrix.matmul(&inverse(&jt)?.matrix).is_identity(),
        ),
    ];
    let mut period_ok = true;
    let mut parity_ok = true;
    for d in 1..=8u32 {
        let i_d = build_i(&q, d).matrix;
        period_ok &= i_d == build_i(&q, d + 4).matrix;
        if d % 2 == 0 {
            parity_ok &= i_d.transpose() == i_d;
            let sign = if d % 4 == 0 { 1 } else { -1 };
            parity_ok &= i_d == cartan_operator(&q).matrix.scale(sign);
        } else {
            parity_ok &= i_d.transpose() == i_d.neg();
        }
    }
    out.push(CheckResult::exact("intersection_period_four", period_ok));
    out.push(CheckResult::exact("intersection_parity", parity_ok));
    let p0 = projector(&q, CycleClass::C0).matrix;
    let p1 = projector(&q, CycleClass::C1).matrix;
    out.push(CheckResult::exact(
        "class_projectors_partition_identity",
        p0.add(&p1).is_identity(),
    ));
    let (nk, nkt) = variation_norms(&q);
    out.push(CheckResult::new("variation_norm_k", nk, 2.0));
    out.push(CheckResult::new("variation_norm_kt", nkt, 3.0));
    Ok(out)
}

/// Exact identities of the reflections and the Coxeter-type transformation.
pub fn monodromy_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let q = quiver(cfg)?;
    let d = cfg.degree;
    let l = q.len();
    let cox = coxeter(&q, d)?;
    let mut out = vec![CheckResult::exact(
        "product_equals_factored",
        cox.matrix == coxeter_factored(&q, d)?.matrix,
    )];
    if d.is_multiple_of(2) {
        let s0 = sigma(&q, CycleClass::C0, d)?.matrix;
        let s1 = sigma(&q, CycleClass::C1, d)?.matrix;
        out.push(CheckResult::exact(
            "sigma_involutions",
            s0.matmul(&s0).is_identity() && s1.matmul(&s1).is_identity(),
        ));
    } else {
        out.push(CheckResult::exact(
            "odd_degree_sigma_is_unipotent_form",
            sigma(&q, CycleClass::C0, d)?.matrix == inverse(&build_jt(&q))?.matrix
                && sigma(&q, CycleClass::C1, d)?.matrix == build_j(&q).matrix,
        ));
    }
    out.push(CheckResult::exact(
        "intersection_preserved",
        preserves_intersection(&cox, d)
            && preserves_intersection(&sigma(&q, CycleClass::C0, d)?, d)
            && preserves_intersection(&sigma(&q, CycleClass::C1, d)?, d),
    ));
    let det = cox.matrix.det_exact();
    let want_det = if ((d as usize - 1) * l).is_multiple_of(2) {
        1
    } else {
        -1
    };
    out.push(CheckResult::exact("determinant_sign", det == want_det));
    out.push(CheckResult::exact(
        "degree_shift_negates",
        coxeter(&q, d + 1)?.matrix == cox.matrix.neg() && coxeter(&q, d + 2)?.matrix == cox.matrix,
    ));
    if d.is_multiple_of(2) {
        let h = coxeter_number(cfg.family, l)?;
        out.push(CheckResult::exact(
            "word_order_matches_coxeter_number",
            word_order(&q, d, 10 * l)? == WordOrder::Finite(h),
        ));
    }
    Ok(out)
}

/// Eigendecomposition quality, closed-form agreement, and the Coxeter
/// pairing.
pub fn spectra_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let q = quiver(cfg)?;
    let l = q.len();
    let dec = eigendecompose(&q)?;

    let cartan = cartan_operator(&q).matrix.to_real();
    let lambda_mat =
        crate::RealMatrix::from_diagonal(&crate::RealVector::from_vec(dec.lambdas.clone()));
    let eigen_residual = (&cartan * &dec.vectors - &dec.vectors * lambda_mat).amax();
    let ortho = (dec.vectors.transpose() * &dec.vectors - crate::RealMatrix::identity(l, l)).amax();
    let open_interval = dec.lambdas.iter().all(|&v| 0.0 < v && v < 4.0);
    let table = finite_type_spectrum(cfg.family, l)?;
    let table_err = dec
        .lambdas
        .iter()
        .zip(&table)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, Real::max);
    let roundtrip = dec
        .lambdas
        .iter()
        .zip(&dec.thetas)
        .map(|(&lam, &th)| (theta_to_lambda(th) - lam).abs())
        .fold(0.0_f64, Real::max);
    let pairing = coxeter_pairing_check(&dec, cfg.degree)?;
    let multiset = coxeter_eigenvalue_multiset_residual(&dec, cfg.degree)?;

    let mut out = vec![
        CheckResult::new("eigen_residual", eigen_residual, 1e-10 * 4.0),
        CheckResult::new("eigenvector_orthonormality", ortho, 1e-12),
        CheckResult::exact("spectrum_in_open_interval", open_interval),
        CheckResult::new("exponent_table_agreement", table_err, 1e-10),
        CheckResult::new("theta_lambda_roundtrip", roundtrip, 4e-12),
        CheckResult::new(
            "coxeter_pairing_row_action",
            pairing.row_action_residual,
            1e-9,
        ),
        CheckResult::new("coxeter_eigenvalue_multiset", multiset, 1e-9),
    ];
    match cfg.family {
        Family::A => {
            let ks = empirical_theta_distribution(&dec).ks_uniform;
            out.push(CheckResult::new(
                "ks_uniform_closed_form",
                (ks - 1.0 / (l as Real + 1.0)).abs(),
                1e-12,
            ));
        }
        Family::D => {
            let has_two = dec.lambdas.iter().any(|&v| (v - 2.0).abs() <= 1e-10);
            out.push(CheckResult::exact("lambda_two_present", has_two));
            let ks = ks_after_atom_removal(&dec)?;
            out.push(CheckResult::new(
                "ks_after_atom_removal_closed_form",
                (ks - 1.0 / (2.0 * l as Real - 2.0)).abs(),
                1e-12,
            ));
        }
    }
    Ok(out)
}

/// Measure atoms, the integration identity, transport, and the exceptional
/// D-family jump.
pub fn measure_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let q = quiver(cfg)?;
    let l = q.len();
    let dec = eigendecompose(&q)?;
    let atoms = xi_atoms(&dec, cfg.degree)?;
    let xi_cox = atoms
        .iter()
        .map(|a| a.residual_xi_cox)
        .fold(0.0_f64, Real::max);
    let resolution = {
        let sum = atoms
            .iter()
            .fold(crate::RealMatrix::zeros(l, l), |acc, a| acc + &a.projector);
        (sum - crate::RealMatrix::identity(l, l)).amax()
    };
    let fourier = fourier_transport(&dec, cfg.degree, 3)?;
    let fourier_max = fourier
        .modes
        .iter()
        .map(|m| m.residual)
        .fold(0.0_f64, Real::max);
    let mut out = vec![
        CheckResult::new("projector_resolution_of_identity", resolution, 1e-10),
        CheckResult::new("xi_right_composition", xi_cox, 1e-9),
        CheckResult::new("integration_half_cartan", integration_residual(&dec), 1e-10),
        CheckResult::new("fourier_single_modes", fourier_max, 1e-9),
        CheckResult::new("fourier_mixed_modes", fourier.mixed_residual, 1e-9),
    ];
    if cfg.family == Family::D {
        out.push(CheckResult::exact(
            "eta_integer_relation",
            eta_integer_relation_holds(&q)?,
        ));
        out.push(CheckResult::new(
            "eta_u_half_invariance",
            eta_u_half_residual(&q)?,
            1e-14,
        ));
        out.push(CheckResult::exact(
            "theta_half_atom_present",
            atoms.iter().any(|a| (a.theta - 0.5).abs() <= 1e-10),
        ));
    }
    Ok(out)
}

/// Which suite(s) to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Geometry,
    Forms,
    Monodromy,
    Spectra,
    Measure,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Forms => "forms",
            Suite::Monodromy => "monodromy",
            Suite::Spectra => "spectra",
            Suite::Measure => "measure",
            Suite::All => "all",
        }
    }
}

/// Run a suite; `All` concatenates the five in a fixed order, each row
/// prefixed with its suite name.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<(&'static str, CheckResult)>> {
    let mut out = Vec::new();
    let mut push = |name: &'static str, rows: Vec<CheckResult>| {
        out.extend(rows.into_iter().map(move |r| (name, r)));
    };
    match suite {
        Suite::Geometry => push("geometry", geometry_suite(cfg)?),
        Suite::Forms => push("forms", forms_suite(cfg)?),
        Suite::Monodromy => push("monodromy", monodromy_suite(cfg)?),
        Suite::Spectra => push("spectra", spectra_suite(cfg)?),
        Suite::Measure => push("measure", measure_suite(cfg)?),
        Suite::All => {
            push("geometry", geometry_suite(cfg)?);
            push("forms", forms_suite(cfg)?);
            push("monodromy", monodromy_suite(cfg)?);
            push("spectra", spectra_suite(cfg)?);
            push("measure", measure_suite(cfg)?);
        }
    }
    Ok(out)
}
