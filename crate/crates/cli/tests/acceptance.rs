//! Acceptance gate: ten end-to-end criteria, one test (and one pass/fail
//! line) each. Run with `--nocapture` to see the PASS lines and timings.
//!
//! The criteria are serialized through a mutex so that the wall-clock bounds
//! asserted below are measured without contention from sibling tests; the
//! internals still parallelize through rayon where the library does.

use halfspec_core::forms::{build_i, build_j, build_jt, cartan_operator, inverse, k_operator};
use halfspec_core::geometry::{critical_points, HessianSignature};
use halfspec_core::measure::{
    eta_integer_relation_holds, eta_u_half_residual, fourier_transport, integration_residual,
};
use halfspec_core::monodromy::{
    coxeter, coxeter_factored, preserves_intersection, sigma, word_order, WordOrder,
};
use halfspec_core::quiver::{build_quiver, CycleClass, Family, QuiverSpec};
use halfspec_core::spectra::{
    a_window_mass, atom_analysis, closed_form_eigvec, cosine_similarity,
    coxeter_eigenvalue_multiset_residual, coxeter_number, coxeter_pairing_check, coxeter_spectrum,
    d_reading_residuals, eigendecompose, eigenvalues_only, empirical_theta_distribution,
    finite_type_spectrum, ks_after_atom_removal, recurrence_residual, spectral_bounds_trend,
};
use std::sync::Mutex;
use std::time::Instant;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

const PI: f64 = std::f64::consts::PI;

fn families() -> [Family; 2] {
    [Family::A, Family::D]
}

fn sizes_for(family: Family, max: usize) -> std::ops::RangeInclusive<usize> {
    match family {
        Family::A => 1..=max,
        Family::D => 4..=max,
    }
}

#[test]
fn criterion_01_geometry() {
    let _guard = serial();
    let start = Instant::now();
    for family in families() {
        for p in critical_points(family, 50).unwrap() {
            if p.x > 0.0 {
                let n: f64 = p.label.parse().unwrap();
                let closed = match p.class {
                    CycleClass::C0 => (n * PI).powi(2),
                    CycleClass::C1 => ((n - 0.5) * PI).powi(2),
                };
                assert!(
                    (p.x - closed).abs() <= 1e-9,
                    "{family} {} x off by {:e}",
                    p.label,
                    (p.x - closed).abs()
                );
            }
            let target = match p.class {
                CycleClass::C0 => 0.0,
                CycleClass::C1 => 1.0,
            };
            assert!((p.critical_value - target).abs() <= 1e-10);
            assert!(p.grad_norm <= 1e-10);
            let expected = match p.class {
                CycleClass::C0 => HessianSignature::Indefinite,
                CycleClass::C1 => HessianSignature::NegativeDefinite,
            };
            assert_eq!(p.hessian, expected);
        }
    }
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 1.0, "geometry took {dt:.3}s (bound 1s)");
    println!("criterion 01 geometry: PASS ({dt:.3}s)");
}

#[test]
fn criterion_02_exact_integer_identities() {
    let _guard = serial();
    let start = Instant::now();
    let sizes: Vec<usize> = (1..=50).chain([100, 500, 2000]).collect();
    for family in families() {
        for &l in &sizes {
            if family == Family::D && l < 4 {
                continue;
            }
            let q = build_quiver(family, l).unwrap();
            let j = build_j(&q);
            let jt = build_jt(&q);
            let k = k_operator(&q).matrix;
            assert!(k.matmul(&k).is_zero(), "{family}:{l} (J - id)^2 != 0");
            let two_id_minus_j = j
                .matrix
                .scale(-1)
                .add(&halfspec_core::IntMatrix::identity(l).scale(2));
            assert_eq!(inverse(&j).unwrap().matrix, two_id_minus_j);
            let two_id_minus_jt = jt
                .matrix
                .scale(-1)
                .add(&halfspec_core::IntMatrix::identity(l).scale(2));
            assert_eq!(inverse(&jt).unwrap().matrix, two_id_minus_jt);
            let cartan = cartan_operator(&q).matrix;
            for d in 1..=8u32 {
                let i_d = build_i(&q, d).matrix;
                assert_eq!(i_d, build_i(&q, d + 4).matrix, "{family}:{l} d={d} period");
                if d % 2 == 0 {
                    let sign = if d % 4 == 0 { 1 } else { -1 };
                    assert_eq!(i_d, cartan.scale(sign), "{family}:{l} d={d} parity");
                    let s0 = sigma(&q, CycleClass::C0, d).unwrap().matrix;
                    let s1 = sigma(&q, CycleClass::C1, d).unwrap().matrix;
                    assert!(s0.matmul(&s0).is_identity(), "{family}:{l} d={d} s0^2");
                    assert!(s1.matmul(&s1).is_identity(), "{family}:{l} d={d} s1^2");
                } else {
                    assert_eq!(i_d.transpose(), i_d.neg(), "{family}:{l} d={d} parity");
                }
                let cox = coxeter(&q, d).unwrap();
                assert_eq!(
                    cox.matrix,
                    coxeter_factored(&q, d).unwrap().matrix,
                    "{family}:{l} d={d} factored form"
                );
                assert!(preserves_intersection(&cox, d), "{family}:{l} d={d} Cox");
                for class in [CycleClass::C0, CycleClass::C1] {
                    let s = sigma(&q, class, d).unwrap();
                    assert!(preserves_intersection(&s, d), "{family}:{l} d={d} sigma");
                }
            }
        }
    }
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 30.0, "exact identities took {dt:.3}s (bound 30s)");
    println!("criterion 02 exact integer identities: PASS ({dt:.3}s)");
}

#[test]
fn criterion_03_coxeter_orders() {
    let _guard = serial();
    let start = Instant::now();
    for family in families() {
        let mut previous = 0usize;
        for l in sizes_for(family, 30) {
            let q = build_quiver(family, l).unwrap();
            let expected = coxeter_number(family, l).unwrap();
            let order = match word_order(&q, 2, 10 * l).unwrap() {
                WordOrder::Finite(h) => h,
                WordOrder::ExceedsBudget(b) => panic!("{family}:{l} no order within {b}"),
            };
            assert_eq!(order, expected, "{family}:{l}");
            assert!(order > previous, "{family}:{l} order not strictly growing");
            previous = order;
        }
    }
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 10.0, "orders took {dt:.3}s (bound 10s)");
    println!("criterion 03 coxeter orders: PASS ({dt:.3}s)");
}

#[test]
fn criterion_04_spectra_closed_forms_and_bounds() {
    let _guard = serial();
    let start = Instant::now();
    for &l in &[10usize, 100, 1000] {
        let dec = eigendecompose(&build_quiver(Family::A, l).unwrap()).unwrap();
        let table = finite_type_spectrum(Family::A, l).unwrap();
        for (a, b) in dec.lambdas.iter().zip(&table) {
            assert!((a - b).abs() <= 1e-10, "A:{l}");
        }
    }
    let sizes = [10usize, 20, 40, 80, 160, 320];
    let trend = spectral_bounds_trend(Family::A, &sizes).unwrap();
    for w in trend.windows(2) {
        assert!(w[1].lambda_min < w[0].lambda_min, "lambda_min not falling");
        assert!(w[1].lambda_max > w[0].lambda_max, "lambda_max not rising");
    }
    for b in &trend {
        let m = 4.0 * ((PI / (2.0 * (b.size as f64 + 1.0))).sin()).powi(2);
        assert!(
            (b.lambda_min - m).abs() <= 1e-10,
            "A:{} lower bound",
            b.size
        );
        assert!(
            (b.lambda_min + b.lambda_max - 4.0).abs() <= 1e-10,
            "A:{} bounds not symmetric",
            b.size
        );
    }
    for &l in &[10usize, 50, 100, 200, 1000] {
        let vals = eigenvalues_only(&build_quiver(Family::D, l).unwrap());
        assert!(
            vals.iter().any(|&v| (v - 2.0).abs() <= 1e-10),
            "D:{l} lambda = 2 missing"
        );
    }
    let dt = start.elapsed().as_secs_f64();
    println!("criterion 04 spectra closed forms and bounds: PASS ({dt:.3}s)");
}

#[test]
fn criterion_05_closed_form_eigenvector_streams() {
    let _guard = serial();
    let start = Instant::now();
    let len = 60usize;
    let mut worst_scaled = 0.0_f64;
    let mut bare_range = (f64::INFINITY, 0.0_f64);
    for j in 1..=20 {
        let theta = j as f64 / 21.0;
        let a_stream = closed_form_eigvec(Family::A, theta, len).unwrap();
        let res_a = recurrence_residual(Family::A, theta, &a_stream);
        assert!(res_a <= 1e-10, "A stream at theta={theta}: {res_a:e}");
        let (scaled, bare) = d_reading_residuals(theta, len).unwrap();
        assert!(scaled <= 1e-10, "D stream at theta={theta}: {scaled:e}");
        worst_scaled = worst_scaled.max(scaled.max(res_a));
        bare_range = (bare_range.0.min(bare), bare_range.1.max(bare));
    }
    let l = 40usize;
    let dec = eigendecompose(&build_quiver(Family::A, l).unwrap()).unwrap();
    for k in 1..=l {
        let theta = k as f64 / (l as f64 + 1.0);
        let stream = closed_form_eigvec(Family::A, theta, l).unwrap();
        let column: Vec<f64> = dec.vectors.column(k - 1).iter().copied().collect();
        let cos = cosine_similarity(&stream, &column);
        assert!(cos >= 1.0 - 1e-9, "A:{l} k={k}: cosine {cos}");
    }
    let dt = start.elapsed().as_secs_f64();
    println!(
        "criterion 05 closed-form eigenvector streams: PASS ({dt:.3}s; \
         scaled-reading residual <= {worst_scaled:.2e}, bare-reading residual \
         spans [{:.2e}, {:.2e}])",
        bare_range.0, bare_range.1
    );
}

#[test]
fn criterion_06_theta_half_atom() {
    let _guard = serial();
    let start = Instant::now();
    for &l in &[4usize, 10, 41, 100, 200] {
        let q = build_quiver(Family::D, l).unwrap();
        assert!(
            eta_integer_relation_holds(&q).unwrap(),
            "D:{l} integer relation"
        );
        let res = eta_u_half_residual(&q).unwrap();
        assert!(res <= 1e-14, "D:{l} U(1/2) invariance: {res:e}");
    }
    let sizes: Vec<usize> = (4..=200).collect();
    let reports = atom_analysis(&sizes).unwrap();
    let mut overlap_range = (f64::INFINITY, 0.0_f64);
    for r in &reports {
        assert!(r.has_lambda_two, "D:{} lambda = 2 missing", r.size);
        let expected_mult = if r.size % 2 == 0 { 2 } else { 1 };
        assert_eq!(r.multiplicity, expected_mult, "D:{}", r.size);
        assert!((r.overlap - 1.0).abs() <= 1e-9, "D:{} overlap", r.size);
        overlap_range = (
            overlap_range.0.min(r.overlap),
            overlap_range.1.max(r.overlap),
        );
    }
    let mut previous = f64::INFINITY;
    for l in (5..=101).step_by(2) {
        let mass = a_window_mass(l).unwrap();
        assert!(
            (mass - 2.0 / (l as f64 + 1.0)).abs() <= 1e-10,
            "A:{l} window mass"
        );
        assert!(mass < previous, "A:{l} window mass not falling");
        previous = mass;
    }
    let dt = start.elapsed().as_secs_f64();
    println!(
        "criterion 06 theta = 1/2 atom: PASS ({dt:.3}s; D overlap in \
         [{:.12}, {:.12}], A window mass falls to {previous:.5})",
        overlap_range.0, overlap_range.1
    );
}

#[test]
fn criterion_07_coxeter_spectrum_pairing() {
    let _guard = serial();
    let start = Instant::now();
    let mut worst_row = 0.0_f64;
    let mut worst_multiset = 0.0_f64;
    for family in families() {
        let q = build_quiver(family, 300).unwrap();
        let dec = eigendecompose(&q).unwrap();
        for d in 1..=4u32 {
            let pairing = coxeter_pairing_check(&dec, d).unwrap();
            assert!(
                pairing.row_action_residual <= 1e-9,
                "{family}:300 d={d}: {:e}",
                pairing.row_action_residual
            );
            let multiset = coxeter_eigenvalue_multiset_residual(&dec, d).unwrap();
            assert!(
                multiset <= 1e-9,
                "{family}:300 d={d}: multiset {multiset:e}"
            );
            worst_row = worst_row.max(pairing.row_action_residual);
            worst_multiset = worst_multiset.max(multiset);
        }
        for d in 1..=3u32 {
            assert_negated_spectrum(&q, d);
        }
    }
    let dt = start.elapsed().as_secs_f64();
    println!(
        "criterion 07 coxeter spectrum pairing: PASS ({dt:.3}s; row action \
         <= {worst_row:.2e}, multiset <= {worst_multiset:.2e})"
    );
}

/// The degree-(d+1) spectrum must be the exact negation of the degree-d one.
fn assert_negated_spectrum(q: &QuiverSpec, d: u32) {
    let a = coxeter_spectrum(q, d).unwrap();
    let b = coxeter_spectrum(q, d + 1).unwrap();
    let mut used = vec![false; b.len()];
    for z in &a {
        let mut best = f64::INFINITY;
        let mut best_i = usize::MAX;
        for (i, w) in b.iter().enumerate() {
            if !used[i] {
                let dist = (z + w).norm();
                if dist < best {
                    best = dist;
                    best_i = i;
                }
            }
        }
        used[best_i] = true;
        assert!(best <= 1e-9, "d={d}: negation mismatch {best:e}");
    }
}

#[test]
fn criterion_08_measure_identities() {
    let _guard = serial();
    let start = Instant::now();
    for family in families() {
        let q = build_quiver(family, 50).unwrap();
        let dec = eigendecompose(&q).unwrap();
        let integration = integration_residual(&dec);
        assert!(
            integration <= 1e-10,
            "{family}:50 integration {integration:e}"
        );
        for d in [2u32, 4] {
            let fourier = fourier_transport(&dec, d, 3).unwrap();
            for m in &fourier.modes {
                assert!(
                    m.residual <= 1e-9,
                    "{family}:50 d={d} mode {}: {:e}",
                    m.mode,
                    m.residual
                );
            }
            assert!(
                fourier.mixed_residual <= 1e-9,
                "{family}:50 d={d} mixed: {:e}",
                fourier.mixed_residual
            );
        }
    }
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 20.0, "measures took {dt:.3}s (bound 20s)");
    println!("criterion 08 measure identities: PASS ({dt:.3}s)");
}

#[test]
fn criterion_09_continuity_trend() {
    let _guard = serial();
    let start = Instant::now();
    for &l in &[50usize, 99, 100, 347, 800] {
        let dec = eigendecompose(&build_quiver(Family::A, l).unwrap()).unwrap();
        let ks = empirical_theta_distribution(&dec).ks_uniform;
        assert!(
            (ks - 1.0 / (l as f64 + 1.0)).abs() <= 1e-12,
            "A:{l} KS {ks}"
        );
    }
    let mut previous = f64::INFINITY;
    for &l in &[50usize, 100, 200, 400, 800] {
        let dec = eigendecompose(&build_quiver(Family::D, l).unwrap()).unwrap();
        let ks = ks_after_atom_removal(&dec).unwrap();
        assert!(
            (ks - 1.0 / (2.0 * l as f64 - 2.0)).abs() <= 1e-12,
            "D:{l} KS {ks}"
        );
        assert!(ks < previous, "D:{l} KS not falling");
        previous = ks;
    }
    let dt = start.elapsed().as_secs_f64();
    println!("criterion 09 continuity trend: PASS ({dt:.3}s)");
}

#[test]
fn criterion_10_deterministic_cli_output() {
    let _guard = serial();
    let start = Instant::now();
    let exe = env!("CARGO_BIN_EXE_halfspec");
    let tmp = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let max_threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .to_string();
    let flag_sets: [&[&str]; 3] = [
        &[
            "verify", "--suite", "all", "--family", "D", "--size", "24", "--format", "json",
        ],
        &["measure", "--family", "A", "--size", "30", "--d", "3"],
        &[
            "spectra", "--family", "D", "--size", "33", "--format", "json",
        ],
    ];
    for (i, flags) in flag_sets.iter().enumerate() {
        let run = |threads: &str| -> Vec<u8> {
            let output = std::process::Command::new(exe)
                .args(*flags)
                .env("HALFSPEC_THREADS", threads)
                .output()
                .expect("spawn CLI");
            assert!(
                output.status.success(),
                "flags {flags:?}: {}",
                String::from_utf8_lossy(&output.stderr)
            );
            output.stdout
        };
        let first = run("1");
        let second = run("1");
        let parallel = run(&max_threads);
        assert_eq!(first, second, "flags {flags:?}: rerun differs");
        assert_eq!(
            first, parallel,
            "flags {flags:?}: thread count changes bytes"
        );

        let out_path = tmp.join(format!("determinism_{i}.out"));
        let status = std::process::Command::new(exe)
            .args(*flags)
            .arg("--out")
            .arg(&out_path)
            .env("HALFSPEC_THREADS", &max_threads)
            .status()
            .expect("spawn CLI");
        assert!(status.success());
        let file_bytes = std::fs::read(&out_path).expect("read --out file");
        assert_eq!(first, file_bytes, "flags {flags:?}: --out file differs");
    }
    let dt = start.elapsed().as_secs_f64();
    println!("criterion 10 deterministic cli output: PASS ({dt:.3}s)");
}
