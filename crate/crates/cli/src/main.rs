//! Command-line front end for the half-infinite A/D truncation toolkit.
//!
//! Subcommands:
//!
//! | command    | emits                                                        |
//! |------------|--------------------------------------------------------------|
//! | `geometry` | refined critical points with class, value, gradient, Hessian |
//! | `spectra`  | eigenvalue/angle rows plus bounds and the KS statistic       |
//! | `coxeter`  | Coxeter-type eigenvalues, word order, pairing residuals      |
//! | `measure`  | atoms, the half-Cartan integration, Fourier transport        |
//! | `verify`   | one row per named invariant check                            |
//!
//! Every command renders one table as CSV (default) or as the JSON envelope
//! `{config, results[], summary{passed, failed}}`. Output is byte-identical
//! across repeated runs and across `HALFSPEC_THREADS` settings. Exit code 0:
//! all checks passed; 1: a check failed or a computation error; 2: usage.

mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use halfspec_core::geometry::critical_points;
use halfspec_core::measure::{
    eta_integer_relation_holds, eta_u_half_residual, fourier_transport, integration_residual,
    xi_atoms,
};
use halfspec_core::monodromy::{coxeter, word_order, WordOrder};
use halfspec_core::quiver::{build_quiver, Family};
use halfspec_core::spectra::{
    coxeter_eigenvalue_multiset_residual, coxeter_pairing_check, coxeter_spectrum, eigendecompose,
    empirical_theta_distribution, finite_type_spectrum, ks_after_atom_removal, theta_to_lambda,
};
use halfspec_core::verify::{
    geometry_suite, measure_suite, monodromy_suite, run_suite, CheckResult, Suite, SuiteConfig,
};
use halfspec_core::{Real, Result};
use report::{error_json, Cell, Format, Report};
use serde_json::{json, Value};
use std::path::PathBuf;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "halfspec",
    version,
    about = "Half-infinite A/D vanishing-lattice truncations: geometry, forms, monodromy, spectra, measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "D", alias = "d")]
    D,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::A => Family::A,
            FamilyArg::D => Family::D,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Geometry,
    Forms,
    Monodromy,
    Spectra,
    Measure,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Geometry => Suite::Geometry,
            SuiteArg::Forms => Suite::Forms,
            SuiteArg::Monodromy => Suite::Monodromy,
            SuiteArg::Spectra => Suite::Spectra,
            SuiteArg::Measure => Suite::Measure,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Args)]
struct OutputOpts {
    /// Output encoding
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Refine and classify the surface critical points
    Geometry {
        #[arg(long)]
        family: FamilyArg,
        /// Number of points per class to refine
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Eigenvalues and spectral angles of the symmetrized pairing
    Spectra {
        #[arg(long)]
        family: FamilyArg,
        /// Truncation size (vertex count)
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Coxeter-type transformation: spectrum, order, pairing residuals
    Coxeter {
        #[arg(long)]
        family: FamilyArg,
        /// Truncation size (vertex count)
        #[arg(long)]
        size: usize,
        /// Suspension degree (>= 1)
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Spectral-measure atoms, integration, and Fourier transport
    Measure {
        #[arg(long)]
        family: FamilyArg,
        /// Truncation size (vertex count)
        #[arg(long)]
        size: usize,
        /// Suspension degree (>= 1)
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Largest Fourier mode |m| to transport
        #[arg(long, default_value_t = 3)]
        m_range: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run named invariant checks and exit nonzero if any fails
    Verify {
        /// Which check suite to run
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long)]
        family: FamilyArg,
        /// Truncation size (vertex count)
        #[arg(long, default_value_t = 16)]
        size: usize,
        /// Suspension degree (>= 1)
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Number of geometry points per class to refine
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn configure_threads() {
    if let Ok(raw) = std::env::var("HALFSPEC_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                // ignore "already initialized": the pool can only be set once
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("invalid HALFSPEC_THREADS value: {raw:?} (expected a positive integer)");
                std::process::exit(2);
            }
        }
    }
}

fn cmd_geometry(family: Family, n_max: usize) -> Result<Report> {
    let mut report = Report::new(&[
        "class",
        "n",
        "x",
        "y",
        "critical_value",
        "grad_norm",
        "hessian_signature",
    ]);
    for p in critical_points(family, n_max)? {
        report.push(vec![
            p.class.to_string().into(),
            p.label.clone().into(),
            p.x.into(),
            p.y.into(),
            p.critical_value.into(),
            p.grad_norm.into(),
            p.hessian.to_string().into(),
        ]);
    }
    let cfg = SuiteConfig {
        family,
        size: 4,
        degree: 1,
        n_max,
    };
    report.checks = geometry_suite(&cfg)?
        .into_iter()
        .map(|c| ("geometry", c))
        .collect();
    Ok(report)
}

fn cmd_spectra(family: Family, size: usize) -> Result<Report> {
    let q = build_quiver(family, size)?;
    let dec = eigendecompose(&q)?;
    let mut report = Report::new(&["kind", "k", "lambda", "theta", "value"]);
    for (k, (&lam, &theta)) in dec.lambdas.iter().zip(&dec.thetas).enumerate() {
        report.push(vec![
            "eigenvalue".into(),
            (k + 1).into(),
            lam.into(),
            theta.into(),
            Cell::Empty,
        ]);
    }
    let scalar = |kind: &str, value: f64| {
        vec![
            kind.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            value.into(),
        ]
    };
    report.push(scalar("lambda_min", dec.lambdas[0]));
    report.push(scalar("lambda_max", dec.lambdas[size - 1]));

    let table = finite_type_spectrum(family, size)?;
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
    let mut checks = vec![
        CheckResult::new("exponent_table_agreement", table_err, 1e-10),
        CheckResult::new("theta_lambda_roundtrip", roundtrip, 4e-12),
    ];
    match family {
        Family::A => {
            let ks = empirical_theta_distribution(&dec).ks_uniform;
            report.push(scalar("ks_uniform", ks));
            checks.push(CheckResult::new(
                "ks_uniform_closed_form",
                (ks - 1.0 / (size as Real + 1.0)).abs(),
                1e-12,
            ));
        }
        Family::D => {
            let has_two = dec.lambdas.iter().any(|&v| (v - 2.0).abs() <= 1e-10);
            checks.push(CheckResult::exact("lambda_two_present", has_two));
            let ks = ks_after_atom_removal(&dec)?;
            report.push(scalar("ks_after_atom_removal", ks));
            checks.push(CheckResult::new(
                "ks_after_atom_removal_closed_form",
                (ks - 1.0 / (2.0 * size as Real - 2.0)).abs(),
                1e-12,
            ));
        }
    }
    report.checks = checks.into_iter().map(|c| ("spectra", c)).collect();
    Ok(report)
}

fn cmd_coxeter(family: Family, size: usize, d: u32) -> Result<Report> {
    let q = build_quiver(family, size)?;
    let dec = eigendecompose(&q)?;
    let mut report = Report::new(&["kind", "index", "re", "im", "value"]);
    for (i, z) in coxeter_spectrum(&q, d)?.iter().enumerate() {
        report.push(vec![
            "eigenvalue".into(),
            (i + 1).into(),
            z.re.into(),
            z.im.into(),
            Cell::Empty,
        ]);
    }
    let scalar =
        |kind: &str, value: Cell| vec![kind.into(), Cell::Empty, Cell::Empty, Cell::Empty, value];
    if d.is_multiple_of(2) {
        let order = match word_order(&q, d, 10 * size.max(4))? {
            WordOrder::Finite(h) => Cell::from(h),
            WordOrder::ExceedsBudget(_) => Cell::Empty,
        };
        report.push(scalar("order", order));
    }
    // the determinant of the Coxeter-type transformation is always +-1
    report.push(scalar(
        "determinant",
        Cell::Int(coxeter(&q, d)?.matrix.det_exact() as i64),
    ));
    let pairing = coxeter_pairing_check(&dec, d)?;
    let multiset = coxeter_eigenvalue_multiset_residual(&dec, d)?;
    report.push(scalar(
        "pairing_row_action_residual",
        pairing.row_action_residual.into(),
    ));
    report.push(scalar(
        "pairing_column_action_diagnostic",
        pairing.column_action_residual.into(),
    ));
    report.push(scalar("eigenvalue_multiset_residual", multiset.into()));

    let cfg = SuiteConfig {
        family,
        size,
        degree: d,
        n_max: 1,
    };
    let mut checks: Vec<(&'static str, CheckResult)> = monodromy_suite(&cfg)?
        .into_iter()
        .map(|c| ("monodromy", c))
        .collect();
    checks.push((
        "coxeter",
        CheckResult::new(
            "coxeter_pairing_row_action",
            pairing.row_action_residual,
            1e-9,
        ),
    ));
    checks.push((
        "coxeter",
        CheckResult::new("coxeter_eigenvalue_multiset", multiset, 1e-9),
    ));
    report.checks = checks;
    Ok(report)
}

fn cmd_measure(family: Family, size: usize, d: u32, m_range: u32) -> Result<Report> {
    let q = build_quiver(family, size)?;
    let dec = eigendecompose(&q)?;
    let atoms = xi_atoms(&dec, d)?;
    let mut report = Report::new(&[
        "kind",
        "theta",
        "lambda",
        "multiplicity",
        "mode",
        "residual",
    ]);
    for atom in &atoms {
        report.push(vec![
            "atom".into(),
            atom.theta.into(),
            atom.lambda.into(),
            atom.multiplicity.into(),
            Cell::Empty,
            atom.residual_xi_cox.into(),
        ]);
        report.push(vec![
            "atom_column_diagnostic".into(),
            atom.theta.into(),
            atom.lambda.into(),
            atom.multiplicity.into(),
            Cell::Empty,
            atom.residual_cox_xi.into(),
        ]);
    }
    let scalar = |kind: &str, mode: Cell, residual: f64| {
        vec![
            kind.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            mode,
            residual.into(),
        ]
    };
    report.push(scalar(
        "integration_half_cartan",
        Cell::Empty,
        integration_residual(&dec),
    ));
    let fourier = fourier_transport(&dec, d, m_range)?;
    for m in &fourier.modes {
        report.push(scalar("fourier_mode", Cell::Int(m.mode), m.residual));
    }
    report.push(scalar(
        "fourier_mixed_modes",
        Cell::Empty,
        fourier.mixed_residual,
    ));
    if family == Family::D {
        let eta_exact = eta_integer_relation_holds(&q)?;
        report.push(scalar(
            "eta_integer_relation",
            Cell::Empty,
            if eta_exact { 0.0 } else { 1.0 },
        ));
        report.push(scalar(
            "eta_u_half_invariance",
            Cell::Empty,
            eta_u_half_residual(&q)?,
        ));
    }
    let cfg = SuiteConfig {
        family,
        size,
        degree: d,
        n_max: 1,
    };
    report.checks = measure_suite(&cfg)?
        .into_iter()
        .map(|c| ("measure", c))
        .collect();
    Ok(report)
}

fn cmd_verify(suite: Suite, cfg: &SuiteConfig) -> Result<Report> {
    let rows = run_suite(suite, cfg)?;
    let mut report = Report::new(&["suite", "name", "residual", "tolerance", "passed"]);
    for (suite_name, check) in &rows {
        report.push(vec![
            (*suite_name).into(),
            check.name.clone().into(),
            check.residual.into(),
            check.tolerance.into(),
            check.passed.into(),
        ]);
    }
    report.checks = rows;
    Ok(report)
}

fn dispatch(command: &Command) -> (Value, &OutputOpts, Result<Report>) {
    match command {
        Command::Geometry {
            family,
            n_max,
            output,
        } => {
            let family = Family::from(*family);
            let config = json!({
                "command": "geometry",
                "family": family.to_string(),
                "n_max": n_max,
                "version": VERSION,
            });
            (config, output, cmd_geometry(family, *n_max))
        }
        Command::Spectra {
            family,
            size,
            output,
        } => {
            let family = Family::from(*family);
            let config = json!({
                "command": "spectra",
                "family": family.to_string(),
                "size": size,
                "version": VERSION,
            });
            (config, output, cmd_spectra(family, *size))
        }
        Command::Coxeter {
            family,
            size,
            d,
            output,
        } => {
            let family = Family::from(*family);
            let config = json!({
                "command": "coxeter",
                "family": family.to_string(),
                "size": size,
                "d": d,
                "version": VERSION,
            });
            (config, output, cmd_coxeter(family, *size, *d))
        }
        Command::Measure {
            family,
            size,
            d,
            m_range,
            output,
        } => {
            let family = Family::from(*family);
            let config = json!({
                "command": "measure",
                "family": family.to_string(),
                "size": size,
                "d": d,
                "m_range": m_range,
                "version": VERSION,
            });
            (config, output, cmd_measure(family, *size, *d, *m_range))
        }
        Command::Verify {
            suite,
            family,
            size,
            d,
            n_max,
            output,
        } => {
            let family = Family::from(*family);
            let suite = Suite::from(*suite);
            let config = json!({
                "command": "verify",
                "suite": suite.name(),
                "family": family.to_string(),
                "size": size,
                "d": d,
                "n_max": n_max,
                "version": VERSION,
            });
            let cfg = SuiteConfig {
                family,
                size: *size,
                degree: *d,
                n_max: *n_max,
            };
            (config, output, cmd_verify(suite, &cfg))
        }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() {
    configure_threads();
    let cli = Cli::parse();
    let (config, output, outcome) = dispatch(&cli.command);
    let code = match outcome {
        Ok(report) => {
            for (suite, check) in &report.checks {
                if !check.passed {
                    eprintln!(
                        "check failed: {suite}/{}: residual {} > tolerance {}",
                        check.name, check.residual, check.tolerance
                    );
                }
            }
            let text = report.render(output.format, config);
            if let Err(e) = write_output(&output.out, &text) {
                eprintln!("cannot write output: {e}");
                std::process::exit(1);
            }
            if report.failed() > 0 {
                1
            } else {
                0
            }
        }
        Err(e) => {
            match output.format {
                Format::Json => {
                    let text = error_json(config, &e.to_string());
                    if write_output(&output.out, &text).is_err() {
                        eprintln!("error: {e}");
                    }
                }
                Format::Csv => eprintln!("error: {e}"),
            }
            1
        }
    };
    std::process::exit(code);
}
