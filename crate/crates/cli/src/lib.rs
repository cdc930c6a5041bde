//! Command-line front end: loads problems from potential files, runs the
//! solvers and checkers, and writes reports and plot-ready tables.
//!
//! Exit-code convention: `0` means the run completed (including a
//! verified theorem), `2` means a theorem hypothesis failed -- a reported
//! scientific outcome, not an error -- and `1` means a usage or numerical
//! error. Output files are written atomically (write-then-rename) and
//! identical configurations produce byte-identical outputs.

use clap::{Args, Parser, Subcommand};
use slspec_core::ambarzumyan::{
    self, BackendChoice, CheckOptions, ConditionReport, Overall,
};
use slspec_core::error::{Error, Result};
use slspec_core::numerics::ToleranceBundle;
use slspec_core::potential::{file as potfile, Potential};
use slspec_core::report;
use slspec_core::solver::{self, BoundaryCondition, SolverOptions};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Numerical toolkit for Sturm-Liouville spectra and Ambarzumyan-type
/// uniqueness checks on the unit interval.
#[derive(Debug, Parser)]
#[command(name = "slspec", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options every subcommand accepts.
#[derive(Debug, Clone, Args)]
pub struct CommonOpts {
    /// Condition tolerance for theorem gates.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Eigenfunction sample grid (odd).
    #[arg(long, default_value_t = 2049)]
    pub grid: usize,
    /// Interior mesh size of the matrix backend.
    #[arg(long, default_value_t = 2047)]
    pub matrix_n: usize,
    /// Backend: shooting | matrix | both (checks only).
    #[arg(long, default_value = "auto")]
    pub backend: String,
    /// Output directory for report and table files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalue table and eigenfunction samples for one problem.
    Spectrum {
        /// Potential file (key = value format).
        #[arg(long)]
        q: PathBuf,
        /// Boundary condition: dirichlet | neumann | robin:A,B | periodic | antiperiodic.
        #[arg(long)]
        bc: String,
        /// Highest 0-based eigenvalue index.
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// First-eigenvalue check of the classic Neumann problem.
    CheckClassic {
        #[arg(long)]
        q: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// General-index check of both uniqueness hypotheses.
    CheckMain {
        #[arg(long)]
        q: PathBuf,
        /// Reference potential file; defaults to zero.
        #[arg(long)]
        qt: Option<PathBuf>,
        #[arg(long)]
        bc: String,
        /// 1-based spectral index.
        #[arg(short, long)]
        n: usize,
        /// Add the equal-means gate and the strengthened conclusion.
        #[arg(long)]
        normalized: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Dirichlet specialization against the exact free reference.
    CheckDirichlet {
        #[arg(long)]
        q: PathBuf,
        #[arg(short, long)]
        n: usize,
        /// Add the zero-mean gate and the strengthened conclusion.
        #[arg(long)]
        zero_mean: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Residual table of the sin^2 / cosine integral identity.
    FourierIdentity {
        #[arg(long)]
        q: PathBuf,
        /// Evaluate the identity for 1..=n.
        #[arg(short, long, default_value_t = 10)]
        n: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Epsilon sweep validating the first-order eigenvalue identity.
    PerturbationStudy {
        /// Reference potential file; defaults to zero.
        #[arg(long)]
        qt: Option<PathBuf>,
        /// Perturbation direction potential file.
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        bc: String,
        /// 1-based spectral index.
        #[arg(short, long)]
        n: usize,
        /// Comma-separated epsilon values.
        #[arg(long, default_value = "1e-1,1e-2,1e-3")]
        eps: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Printed end-to-end walkthrough of the Dirichlet example.
    Demo,
}

/// Parses a boundary-condition spec string.
pub fn parse_bc(spec: &str) -> Result<BoundaryCondition> {
    match spec.to_ascii_lowercase().as_str() {
        "dirichlet" => Ok(BoundaryCondition::dirichlet()),
        "neumann" => Ok(BoundaryCondition::neumann()),
        "periodic" => Ok(BoundaryCondition::periodic()),
        "antiperiodic" => Ok(BoundaryCondition::antiperiodic()),
        other => {
            if let Some(angles) = other.strip_prefix("robin:") {
                let (a, b) = angles.split_once(',').ok_or_else(|| {
                    Error::Usage(format!("robin spec needs two angles, got `{angles}`"))
                })?;
                let alpha: f64 = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad angle `{a}`")))?;
                let beta: f64 = b
                    .trim()
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad angle `{b}`")))?;
                BoundaryCondition::robin(alpha, beta)
            } else {
                Err(Error::Usage(format!(
                    "unknown boundary condition `{spec}` (expected dirichlet, neumann, robin:A,B, periodic or antiperiodic)"
                )))
            }
        }
    }
}

fn parse_backend(spec: &str) -> Result<(BackendChoice, bool)> {
    match spec.to_ascii_lowercase().as_str() {
        "auto" => Ok((BackendChoice::Auto, false)),
        "shooting" => Ok((BackendChoice::Shooting, false)),
        "matrix" => Ok((BackendChoice::Matrix, false)),
        "both" => Ok((BackendChoice::Shooting, true)),
        other => Err(Error::Usage(format!(
            "unknown backend `{other}` (expected shooting, matrix, both or auto)"
        ))),
    }
}

fn load_potential(path: &Path) -> Result<Potential> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    potfile::parse_str(&text)
}

/// Writes a file atomically: to a temporary sibling first, then renamed
/// into place.
pub fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn check_options(common: &CommonOpts, backend: BackendChoice) -> CheckOptions {
    CheckOptions {
        condition_tol: common.tol,
        solver: SolverOptions {
            tol: ToleranceBundle::default(),
            grid_size: common.grid,
            matrix_n: common.matrix_n,
        },
        backend,
    }
}

/// One row of a perturbation sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbationRow {
    pub eps: f64,
    pub lambda: f64,
    pub delta: f64,
    pub first_order: f64,
    pub abs_error: f64,
}

/// Sweeps `lambda_n(qt + eps p)` over the given epsilons and measures the
/// error of the first-order prediction `delta = eps (p y_n, y_n)`.
pub fn perturbation_sweep(
    qt: &Potential,
    p: &Potential,
    bc: &BoundaryCondition,
    n: usize,
    eps: &[f64],
    opts: &CheckOptions,
) -> Result<Vec<PerturbationRow>> {
    if n == 0 {
        return Err(Error::Usage("the index n must be >= 1".into()));
    }
    let k = n - 1;
    let base = solver::spectrum(qt, bc, k, &opts.solver)?;
    let lambda_base = base.pairs[k].eigenvalue;
    let ip = solver::weighted_inner_product(p, &base.pairs[k].eigenfunction);
    eps.iter()
        .map(|&e| {
            let q = qt.add(&p.scaled(e));
            let lambda = solver::eigenvalue(&q, bc, k, &opts.solver)?;
            let delta = lambda - lambda_base;
            Ok(PerturbationRow {
                eps: e,
                lambda,
                delta,
                first_order: e * ip,
                abs_error: (delta - e * ip).abs(),
            })
        })
        .collect()
}

/// Least-squares slope of `log(abs_error)` against `log(eps)`.
pub fn sweep_slope(rows: &[PerturbationRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.abs_error > 0.0)
        .map(|r| (r.eps.ln(), r.abs_error.ln()))
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn report_summary(report: &ConditionReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "theorem {} (n = {}, backend {}, bc {})",
        report.theorem.label(),
        report.n,
        report.backend.label(),
        report.bc
    );
    let _ = writeln!(out, "  delta                  = {}", report::fmt_f64(report.delta));
    let _ = writeln!(
        out,
        "  inner_product_value    = {}",
        report::fmt_f64(report.inner_product_value)
    );
    let _ = writeln!(
        out,
        "  residual_inner         = {} [{}]",
        report::fmt_f64(report.residual_inner),
        report.verdicts.inner.label()
    );
    if let Some(r) = report.residual_extremal {
        let _ = writeln!(
            out,
            "  residual_extremal      = {} [{}]",
            report::fmt_f64(r),
            report.verdicts.extremal.label()
        );
    }
    if let Some(m) = report.mean_residual {
        let _ = writeln!(
            out,
            "  mean_residual          = {} [{}]",
            report::fmt_f64(m),
            report
                .verdicts
                .mean
                .map(|v| v.label())
                .unwrap_or("skipped")
        );
    }
    let _ = writeln!(
        out,
        "  conclusion_l1_residual = {} [{}]",
        report::fmt_f64(report.conclusion_l1_residual),
        report.verdicts.conclusion.label()
    );
    let _ = writeln!(out, "  overall: {}", report.verdicts.overall.label());
    out
}

fn write_check_outputs(
    out_dir: &Path,
    suffix: &str,
    report: &ConditionReport,
) -> Result<()> {
    let flat = report::write_flat(report);
    let tree = report::write_tree(report);
    atomic_write(&out_dir.join(format!("report{suffix}.txt")), &flat)?;
    atomic_write(&out_dir.join(format!("report{suffix}.tree.txt")), &tree)?;
    Ok(())
}

fn exit_code_for(report: &ConditionReport) -> Result<u8> {
    match report.verdicts.overall {
        Overall::Verified => Ok(0),
        Overall::HypothesesNotSatisfied => Ok(2),
        Overall::Violated => Err(Error::Numerical {
            context: "theorem-check",
            details: "hypotheses passed but the conclusion failed; this indicates a solver \
                      or tolerance problem, not a counterexample"
                .into(),
        }),
    }
}

/// Runs one check for each requested backend, writing suffixed reports
/// when both are requested.
fn run_check<F>(
    common: &CommonOpts,
    check: F,
    output: &mut String,
) -> Result<u8>
where
    F: Fn(&CheckOptions) -> Result<ConditionReport>,
{
    let (first, both) = parse_backend(&common.backend)?;
    let mut code = 0u8;
    let backends: Vec<(BackendChoice, &str)> = if both {
        vec![
            (BackendChoice::Shooting, "_shooting"),
            (BackendChoice::Matrix, "_matrix"),
        ]
    } else {
        vec![(first, "")]
    };
    for (backend, suffix) in backends {
        let opts = check_options(common, backend);
        let report = check(&opts)?;
        output.push_str(&report_summary(&report));
        write_check_outputs(&common.out, suffix, &report)?;
        code = code.max(exit_code_for(&report)?);
    }
    Ok(code)
}

/// Executes a parsed command. Returns the process exit code (0 or 2);
/// usage and numerical failures surface as errors (exit code 1).
pub fn run(command: &Command, output: &mut String) -> Result<u8> {
    match command {
        Command::Spectrum {
            q,
            bc,
            k_max,
            common,
        } => {
            let potential = load_potential(q)?;
            let bc = parse_bc(bc)?;
            let (choice, both) = parse_backend(&common.backend)?;
            let solver_opts = check_options(common, choice).solver;
            let variants: Vec<(&str, bool)> = if both {
                vec![("_shooting", false), ("_matrix", true)]
            } else {
                vec![("", matches!(choice, BackendChoice::Matrix))]
            };
            for (suffix, force_matrix) in variants {
                let data = if force_matrix {
                    solver::matrix::matrix_eigen(
                        &potential,
                        &bc,
                        solver_opts.matrix_n,
                        *k_max,
                        solver_opts.grid_size,
                    )?
                } else {
                    solver::spectrum(&potential, &bc, *k_max, &solver_opts)?
                };
                let table = report::write_spectrum_table(&data);
                output.push_str(&table);
                atomic_write(&common.out.join(format!("eigenvalues{suffix}.csv")), &table)?;
                atomic_write(
                    &common.out.join(format!("eigenfunctions{suffix}.csv")),
                    &report::write_eigenfunction_table(&data),
                )?;
            }
            Ok(0)
        }
        Command::CheckClassic { q, common } => {
            let potential = load_potential(q)?;
            run_check(common, |opts| ambarzumyan::check_classic(&potential, opts), output)
        }
        Command::CheckMain {
            q,
            qt,
            bc,
            n,
            normalized,
            common,
        } => {
            let potential = load_potential(q)?;
            let reference = match qt {
                Some(path) => load_potential(path)?,
                None => Potential::zero(),
            };
            let bc = parse_bc(bc)?;
            run_check(
                common,
                |opts| {
                    if *normalized {
                        ambarzumyan::check_main_normalized(&potential, &reference, &bc, *n, opts)
                    } else {
                        ambarzumyan::check_main(&potential, &reference, &bc, *n, opts)
                    }
                },
                output,
            )
        }
        Command::CheckDirichlet {
            q,
            n,
            zero_mean,
            common,
        } => {
            let potential = load_potential(q)?;
            run_check(
                common,
                |opts| {
                    if *zero_mean {
                        ambarzumyan::check_dirichlet_zero_mean(&potential, *n, opts)
                    } else {
                        ambarzumyan::check_dirichlet_corollary(&potential, *n, opts)
                    }
                },
                output,
            )
        }
        Command::FourierIdentity { q, n, common } => {
            let potential = load_potential(q)?;
            let mut table = String::from("n,lhs,rhs,residual\n");
            let mut worst = 0.0f64;
            for idx in 1..=*n {
                let f = ambarzumyan::fourier_identity(&potential, idx)?;
                worst = worst.max(f.residual);
                let _ = writeln!(
                    table,
                    "{},{},{},{}",
                    f.n,
                    report::fmt_f64(f.lhs),
                    report::fmt_f64(f.rhs),
                    report::fmt_f64(f.residual)
                );
            }
            output.push_str(&table);
            let _ = writeln!(output, "worst residual = {}", report::fmt_f64(worst));
            atomic_write(&common.out.join("fourier_identity.csv"), &table)?;
            Ok(if worst <= common.tol { 0 } else { 2 })
        }
        Command::PerturbationStudy {
            qt,
            p,
            bc,
            n,
            eps,
            common,
        } => {
            let reference = match qt {
                Some(path) => load_potential(path)?,
                None => Potential::zero(),
            };
            let direction = load_potential(p)?;
            let bc = parse_bc(bc)?;
            let eps: Vec<f64> = eps
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Usage(format!("bad epsilon `{t}`")))
                })
                .collect::<Result<_>>()?;
            let (choice, _) = parse_backend(&common.backend)?;
            // tight solver settings: the sweep resolves second-order
            // eigenvalue differences
            let mut opts = check_options(common, choice);
            opts.solver.tol.root_tol = 1e-11;
            opts.solver.tol.ode_rel = 1e-12;
            opts.solver.tol.ode_abs = 1e-14;
            let rows = perturbation_sweep(&reference, &direction, &bc, *n, &eps, &opts)?;
            let mut table = String::from("eps,lambda,delta,first_order,abs_error\n");
            for r in &rows {
                let _ = writeln!(
                    table,
                    "{},{},{},{},{}",
                    report::fmt_f64(r.eps),
                    report::fmt_f64(r.lambda),
                    report::fmt_f64(r.delta),
                    report::fmt_f64(r.first_order),
                    report::fmt_f64(r.abs_error)
                );
            }
            output.push_str(&table);
            let slope = sweep_slope(&rows);
            let _ = writeln!(output, "log-log error slope = {slope:.3}");
            atomic_write(&common.out.join("perturbation.csv"), &table)?;
            Ok(0)
        }
        Command::Demo => {
            output.push_str(&demo());
            Ok(0)
        }
    }
}

/// End-to-end walkthrough of the Dirichlet specialization: a constant
/// shift satisfies every gate and verifies the conclusion, while a
/// non-constant potential fails the hypotheses. Output is deterministic.
pub fn demo() -> String {
    let opts = CheckOptions::default();
    let mut out = String::new();
    let _ = writeln!(out, "Dirichlet walkthrough: -y'' + q y = lambda y, y(0) = y(1) = 0");
    let _ = writeln!(
        out,
        "reference: q_tilde = 0, lambda_tilde_n = (n pi)^2, y_tilde_n = sqrt(2) sin(n pi x)"
    );

    let fixtures: [(&str, Potential); 2] = [
        ("constant shift q = 0.75", Potential::constant(0.75)),
        ("non-constant q = cos(2 pi x)", Potential::cosine(1)),
    ];
    for (label, q) in fixtures {
        let report = ambarzumyan::check_dirichlet_corollary(&q, 1, &opts)
            .expect("demo fixtures are well-posed");
        let _ = writeln!(out, "\n[{label}] n = 1");
        let _ = writeln!(
            out,
            "  lambda_1 - pi^2            = {}",
            report::fmt_f64(report.delta)
        );
        let _ = writeln!(
            out,
            "  2 int q sin^2(pi x) dx     = {}",
            report::fmt_f64(report.inner_product_value)
        );
        let _ = writeln!(
            out,
            "  sin2-identity residual     = {} [{}]",
            report::fmt_f64(report.residual_inner),
            report.verdicts.inner.label()
        );
        if let Some(r) = report.residual_extremal {
            let _ = writeln!(
                out,
                "  extremal residual          = {} [{}]",
                report::fmt_f64(r),
                report.verdicts.extremal.label()
            );
        }
        let _ = writeln!(
            out,
            "  conclusion_l1_residual     = {}",
            report::fmt_f64(report.conclusion_l1_residual)
        );
        let _ = writeln!(out, "  overall: {}", report.verdicts.overall.label());
    }
    let _ = writeln!(
        out,
        "\nthe hypotheses hold exactly for constant shifts and fail for any\n\
         non-constant potential, matching the uniqueness statement"
    );
    out
}
