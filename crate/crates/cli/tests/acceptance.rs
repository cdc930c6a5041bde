//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measured margins (run with `--nocapture` to see them).
//!
//! Tolerances are pinned here, not configurable, so a regression anywhere
//! in the stack fails loudly.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use slspec_cli::{perturbation_sweep, run, sweep_slope, Command, CommonOpts};
use slspec_core::ambarzumyan::{self, CheckOptions, Overall, Verdict};
use slspec_core::parallel;
use slspec_core::potential::Potential;
use slspec_core::report;
use slspec_core::solver::{self, matrix, prufer, BoundaryCondition, SolverOptions};
use std::f64::consts::PI;
use std::fs;
use std::time::Instant;

fn pc13() -> Potential {
    Potential::piecewise_constant(vec![0.0, 0.5, 1.0], vec![1.0, 3.0]).unwrap()
}

fn bump() -> Potential {
    // tent profile as a tabulated catalog entry
    let m = 33usize;
    let values = (0..m)
        .map(|i| {
            let x = i as f64 / (m - 1) as f64;
            1.0 - (2.0 * x - 1.0).abs()
        })
        .collect();
    Potential::from_table(values).unwrap()
}

fn robin() -> BoundaryCondition {
    BoundaryCondition::robin(PI / 4.0, PI / 4.0).unwrap()
}

const EXTRAPOLATION_MESHES: [usize; 3] = [256, 512, 1024];

#[test]
fn criterion_01_exact_dirichlet_free_spectrum() {
    let start = Instant::now();
    let q = Potential::zero();
    let bc = BoundaryCondition::dirichlet();
    let opts = SolverOptions::default();

    let shooting: Vec<f64> = parallel::map_indices(20, |k| {
        prufer::eigenvalue_shooting(&q, &bc, k, &opts.tol).unwrap()
    });
    let extrapolated =
        matrix::matrix_eigenvalues_extrapolated(&q, &bc, &EXTRAPOLATION_MESHES, 19).unwrap();

    let mut worst = 0.0f64;
    for n in 1..=20usize {
        let exact = (n as f64 * PI).powi(2);
        for lambda in [shooting[n - 1], extrapolated[n - 1]] {
            let rel = ((lambda - exact) / exact).abs();
            worst = worst.max(rel);
            assert!(rel <= 1e-8, "n={n}: {lambda} vs {exact} (rel {rel:e})");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "[acceptance] criterion 01 (Dirichlet free spectrum, both backends): PASS \
         (worst rel err {worst:.2e}, {elapsed:?})"
    );
}

#[test]
fn criterion_02_exact_neumann_free_spectrum() {
    let q = Potential::zero();
    let bc = BoundaryCondition::neumann();
    let opts = SolverOptions::default();

    let shooting: Vec<f64> = parallel::map_indices(20, |k| {
        prufer::eigenvalue_shooting(&q, &bc, k, &opts.tol).unwrap()
    });
    let extrapolated =
        matrix::matrix_eigenvalues_extrapolated(&q, &bc, &EXTRAPOLATION_MESHES, 19).unwrap();

    let mut worst = 0.0f64;
    for k in 0..20usize {
        let exact = (k as f64 * PI).powi(2);
        for lambda in [shooting[k], extrapolated[k]] {
            // relative error, guarded at the zero eigenvalue
            let rel = (lambda - exact).abs() / exact.max(1.0);
            worst = worst.max(rel);
            assert!(rel <= 1e-8, "k={k}: {lambda} vs {exact}");
        }
    }
    println!(
        "[acceptance] criterion 02 (Neumann free spectrum, both backends): PASS \
         (worst rel err {worst:.2e})"
    );
}

#[test]
fn criterion_03_forward_theorem_suite() {
    let opts = CheckOptions::default();
    let references = [Potential::zero(), Potential::cosine(1), pc13()];
    let bcs = [
        BoundaryCondition::dirichlet(),
        BoundaryCondition::neumann(),
        robin(),
        BoundaryCondition::periodic(),
    ];
    let mut rng = StdRng::seed_from_u64(0xACC3);
    let mut cases = Vec::new();
    for qt in &references {
        for bc in &bcs {
            for n in 1..=3usize {
                for _ in 0..10 {
                    let c: f64 = rng.random_range(-10.0..10.0);
                    cases.push((qt.clone(), *bc, n, c));
                }
            }
        }
    }
    assert_eq!(cases.len(), 360);

    let reports = parallel::map_slice(&cases, |(qt, bc, n, c)| {
        ambarzumyan::check_main(&qt.shift(*c), qt, bc, *n, &opts).unwrap()
    });

    let mut worst = 0.0f64;
    for (report, (qt, bc, n, c)) in reports.iter().zip(&cases) {
        let context = format!("qt={}, bc={}, n={n}, c={c}", qt.describe(), bc.describe());
        assert!(report.residual_inner <= 1e-6, "inner residual: {context}");
        assert!(
            report.residual_extremal.unwrap() <= 1e-6,
            "extremal residual: {context}"
        );
        assert!(
            report.conclusion_l1_residual <= 1e-6,
            "conclusion residual: {context}"
        );
        assert_eq!(report.verdicts.overall, Overall::Verified, "{context}");
        worst = worst
            .max(report.residual_inner)
            .max(report.residual_extremal.unwrap())
            .max(report.conclusion_l1_residual);
    }
    println!(
        "[acceptance] criterion 03 (forward suite, 360 constant-shift checks): PASS \
         (worst residual {worst:.2e})"
    );
}

#[test]
fn criterion_04_contrapositive_suite() {
    let opts = CheckOptions::default();
    let references = [Potential::zero(), Potential::cosine(1), pc13()];
    let perturbations = [
        Potential::cosine(1),
        Potential::sine(1),
        Potential::cosine(2),
        Potential::piecewise_constant(vec![0.0, 0.3, 1.0], vec![0.0, 2.0]).unwrap(),
        bump(),
    ];
    let separated = [BoundaryCondition::dirichlet(), BoundaryCondition::neumann(), robin()];

    let mut fixtures = Vec::new();
    for (i, qt) in references.iter().enumerate() {
        for (j, p) in perturbations.iter().enumerate() {
            for scale in [0.8, 1.6] {
                let bc = separated[(i + j) % 3];
                let n = 1 + (i + j) % 2;
                fixtures.push((qt.clone(), p.scaled(scale), bc, n));
            }
        }
    }
    assert_eq!(fixtures.len(), 30);

    let reports = parallel::map_slice(&fixtures, |(qt, p, bc, n)| {
        ambarzumyan::check_main(&qt.add(p), qt, bc, *n, &opts).unwrap()
    });

    for (report, (qt, p, bc, n)) in reports.iter().zip(&fixtures) {
        let context = format!(
            "qt={}, p={}, bc={}, n={n}",
            qt.describe(),
            p.describe(),
            bc.describe()
        );
        assert!(
            report.conclusion_l1_residual > 1e-3,
            "expected a visibly non-constant difference: {context}"
        );
        let hypothesis_failed = report.residual_inner > 1e-6
            || report.residual_extremal.is_none_or(|r| r > 1e-6);
        assert!(
            hypothesis_failed,
            "conclusion fails but both hypotheses pass: {context}"
        );
        assert_eq!(report.verdicts.overall, Overall::HypothesesNotSatisfied, "{context}");
    }
    println!(
        "[acceptance] criterion 04 (contrapositive suite, 30 non-constant fixtures): PASS"
    );
}

#[test]
fn criterion_05_closed_form_inner_product() {
    let w = Potential::cosine(1);
    let grid = 2049usize;
    for n in 1..=6usize {
        let mut samples: Vec<f64> = (0..grid)
            .map(|i| {
                let x = i as f64 / (grid - 1) as f64;
                std::f64::consts::SQRT_2 * (n as f64 * PI * x).sin()
            })
            .collect();
        solver::normalize_eigenfunction(&mut samples).unwrap();
        let ip = solver::weighted_inner_product(&w, &samples);
        let exact = if n == 1 { -0.5 } else { 0.0 };
        assert!(
            (ip - exact).abs() <= 1e-9,
            "n={n}: {ip} vs {exact} (err {:e})",
            (ip - exact).abs()
        );
    }
    println!(
        "[acceptance] criterion 05 (inner product (cos 2 pi x * y_n, y_n) = -1/2, 0): PASS"
    );
}

#[test]
fn criterion_06_fourier_identity_residuals() {
    let catalog = [
        Potential::zero(),
        Potential::constant(2.5),
        Potential::cosine(1),
        Potential::sine(1),
        Potential::cosine(2),
        pc13(),
        bump(),
    ];
    let mut worst = 0.0f64;
    for q in &catalog {
        for n in 1..=10usize {
            let f = ambarzumyan::fourier_identity(q, n).unwrap();
            worst = worst.max(f.residual);
            assert!(
                f.residual <= 1e-10,
                "{} n={n}: residual {:e}",
                q.describe(),
                f.residual
            );
        }
    }
    println!(
        "[acceptance] criterion 06 (integral identity across catalog, n <= 10): PASS \
         (worst residual {worst:.2e})"
    );
}

#[test]
fn criterion_07_first_order_perturbation_slopes() {
    let mut opts = CheckOptions::default();
    opts.solver.tol.root_tol = 1e-11;
    opts.solver.tol.ode_rel = 1e-12;
    opts.solver.tol.ode_abs = 1e-14;
    let pc02 = Potential::piecewise_constant(vec![0.0, 0.3, 1.0], vec![0.0, 2.0]).unwrap();
    let combos: Vec<(Potential, Potential, usize)> = vec![
        (Potential::zero(), Potential::cosine(1), 1),
        (Potential::zero(), Potential::sine(1), 2),
        (Potential::zero(), pc02.clone(), 3),
        (Potential::cosine(1), Potential::sine(1), 1),
        (Potential::cosine(1), pc02.clone(), 2),
        (Potential::cosine(1), Potential::cosine(2), 3),
        (pc13(), Potential::cosine(1), 1),
        (pc13(), Potential::sine(1), 2),
        (pc13(), pc02, 3),
    ];
    let bc = BoundaryCondition::dirichlet();
    let eps = [1e-1, 1e-2, 1e-3];

    let slopes = parallel::map_slice(&combos, |(qt, p, n)| {
        let rows = perturbation_sweep(qt, p, &bc, *n, &eps, &opts).unwrap();
        sweep_slope(&rows)
    });
    for (slope, (qt, p, n)) in slopes.iter().zip(&combos) {
        assert!(
            *slope >= 1.8,
            "qt={}, p={}, n={n}: slope {slope}",
            qt.describe(),
            p.describe()
        );
    }
    let min_slope = slopes.iter().cloned().fold(f64::INFINITY, f64::min);
    println!(
        "[acceptance] criterion 07 (first-order identity, 9 sweeps): PASS \
         (min slope {min_slope:.2})"
    );
}

#[test]
fn criterion_08_cross_backend_agreement() {
    // documented bound: 5 (pi k + pi)^2 h^2 + 1e-6 with h the finest mesh
    // width, matrix side Richardson-extrapolated over the standard meshes
    let h: f64 = 1.0 / (*EXTRAPOLATION_MESHES.last().unwrap() as f64 + 1.0);
    let opts = SolverOptions::default();
    let catalog = [Potential::zero(), Potential::cosine(1), pc13()];
    let bcs = [BoundaryCondition::dirichlet(), BoundaryCondition::neumann(), robin()];

    let mut worst_ratio = 0.0f64;
    for q in &catalog {
        for bc in &bcs {
            let extrapolated =
                matrix::matrix_eigenvalues_extrapolated(q, bc, &EXTRAPOLATION_MESHES, 10)
                    .unwrap();
            let shooting: Vec<f64> = parallel::map_indices(11, |k| {
                prufer::eigenvalue_shooting(q, bc, k, &opts.tol).unwrap()
            });
            for k in 0..=10usize {
                let bound = 5.0 * ((k as f64 + 1.0) * PI).powi(2) * h * h + 1e-6;
                let diff = (shooting[k] - extrapolated[k]).abs();
                worst_ratio = worst_ratio.max(diff / bound);
                assert!(
                    diff <= bound,
                    "{} under {}: k={k}, |diff| = {diff:e} > bound {bound:e}",
                    q.describe(),
                    bc.describe()
                );
            }
        }
    }
    println!(
        "[acceptance] criterion 08 (cross-backend agreement, k <= 10): PASS \
         (worst bound fraction {worst_ratio:.3})"
    );
}

#[test]
fn criterion_09_shift_invariance_randomized() {
    let opts = SolverOptions::default();
    let catalog = [Potential::zero(), Potential::cosine(1), pc13(), bump()];
    let bcs = [BoundaryCondition::dirichlet(), BoundaryCondition::neumann(), robin()];
    let mut rng = StdRng::seed_from_u64(0x5417);
    let cases: Vec<(usize, usize, usize, f64)> = (0..200)
        .map(|_| {
            (
                rng.random_range(0..catalog.len()),
                rng.random_range(0..bcs.len()),
                rng.random_range(0..4usize),
                rng.random_range(-10.0..10.0),
            )
        })
        .collect();

    let worst = parallel::map_slice(&cases, |&(qi, bi, k, c)| {
        let q = &catalog[qi];
        let bc = &bcs[bi];
        let base = prufer::eigenvalue_shooting(q, bc, k, &opts.tol).unwrap();
        let shifted = prufer::eigenvalue_shooting(&q.shift(c), bc, k, &opts.tol).unwrap();
        (shifted - base - c).abs()
    })
    .into_iter()
    .fold(0.0f64, f64::max);
    assert!(worst <= 1e-8, "worst shift defect {worst:e}");

    // eigenfunction samples are shift-invariant too (spot checks)
    for &(qi, bi, k, c) in cases.iter().step_by(50) {
        let q = &catalog[qi];
        let bc = &bcs[bi];
        let base = solver::spectrum(q, bc, k, &opts).unwrap();
        let shifted = solver::spectrum(&q.shift(c), bc, k, &opts).unwrap();
        let sup = base.pairs[k]
            .eigenfunction
            .iter()
            .zip(shifted.pairs[k].eigenfunction.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(sup <= 1e-8, "eigenfunction shift defect {sup:e}");
    }
    println!(
        "[acceptance] criterion 09 (shift invariance, 200 randomized cases): PASS \
         (worst defect {worst:.2e})"
    );
}

#[test]
fn criterion_10_oscillation_indexing() {
    let opts = SolverOptions::default();
    let catalog = [
        Potential::zero(),
        Potential::constant(2.5),
        Potential::cosine(1),
        pc13(),
    ];
    let bcs = [BoundaryCondition::dirichlet(), BoundaryCondition::neumann(), robin()];
    let grids: Vec<(Potential, BoundaryCondition)> = catalog
        .iter()
        .flat_map(|q| bcs.iter().map(move |bc| (q.clone(), *bc)))
        .collect();
    let spectra = parallel::map_slice(&grids, |(q, bc)| {
        solver::spectrum(q, bc, 10, &opts).unwrap()
    });
    for data in &spectra {
        for pair in &data.pairs {
            assert_eq!(
                pair.node_count,
                pair.index,
                "{} under {}: index {} has {} interior nodes",
                data.potential.describe(),
                data.boundary.describe(),
                pair.index,
                pair.node_count
            );
        }
    }
    println!(
        "[acceptance] criterion 10 (oscillation indexing, k <= 10, all catalog): PASS"
    );
}

#[test]
fn criterion_11_cli_determinism() {
    let base = std::env::temp_dir().join(format!("slspec-acceptance-{}", std::process::id()));
    let _ = fs::remove_dir_all(&base);
    let mut outputs: Vec<Vec<u8>> = Vec::new();
    for run_idx in 0..2 {
        let dir = base.join(format!("run{run_idx}"));
        fs::create_dir_all(&dir).unwrap();
        let q_path = dir.join("q.pot");
        fs::write(&q_path, "kind = piecewise\nbreakpoints = 0, 0.5, 1\nvalues = 1, 3\n").unwrap();
        let common = CommonOpts {
            tol: 1e-6,
            grid: 2049,
            matrix_n: 2047,
            backend: "both".into(),
            out: dir.clone(),
        };
        let cmd = Command::CheckMain {
            q: q_path,
            qt: None,
            bc: "robin:0.7853981633974483,0.7853981633974483".into(),
            n: 2,
            normalized: false,
            common,
        };
        let mut printed = String::new();
        let code = run(&cmd, &mut printed).unwrap();
        assert_eq!(code, 2); // non-constant potential: hypotheses fail

        let mut bytes = printed.into_bytes();
        for name in [
            "report_shooting.txt",
            "report_shooting.tree.txt",
            "report_matrix.txt",
            "report_matrix.tree.txt",
        ] {
            bytes.extend_from_slice(&fs::read(dir.join(name)).unwrap());
        }
        outputs.push(bytes);
    }
    assert_eq!(outputs[0], outputs[1], "repeated runs differ");

    // reports also re-parse into identical in-memory values
    let flat = fs::read_to_string(base.join("run0/report_shooting.txt")).unwrap();
    let report = report::parse_flat(&flat).unwrap();
    assert_eq!(report.verdicts.inner, Verdict::Fail);
    println!("[acceptance] criterion 11 (byte-identical CLI reruns): PASS");
}
