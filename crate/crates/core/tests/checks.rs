//! Cross-cutting checks of the theorem evaluators against the solver
//! stack: the analytic Dirichlet specialization must agree with the fully
//! numeric general-index path, and the backend dispatch rules must hold.

use slspec_core::ambarzumyan::{
    check_dirichlet_corollary, check_first_condition, check_main, CheckOptions,
};
use slspec_core::potential::Potential;
use slspec_core::solver::{self, Backend, BoundaryCondition, SolverOptions};
use std::f64::consts::PI;

#[test]
fn dirichlet_corollary_agrees_with_generic_check_main() {
    // same fixtures through the exact free reference and through the
    // numeric solver; every shared quantity agrees to 1e-7
    let opts = CheckOptions::default();
    let fixtures = [
        Potential::constant(3.5),
        Potential::cosine(1),
        Potential::piecewise_constant(vec![0.0, 0.5, 1.0], vec![1.0, 3.0]).unwrap(),
    ];
    for q in &fixtures {
        for n in 1..=3usize {
            let analytic = check_dirichlet_corollary(q, n, &opts).unwrap();
            let numeric =
                check_main(q, &Potential::zero(), &BoundaryCondition::dirichlet(), n, &opts)
                    .unwrap();
            let ctx = format!("q={}, n={n}", q.describe());
            assert!(
                (analytic.delta - numeric.delta).abs() < 1e-7,
                "delta: {ctx}: {} vs {}",
                analytic.delta,
                numeric.delta
            );
            assert!(
                (analytic.inner_product_value - numeric.inner_product_value).abs() < 1e-7,
                "inner product: {ctx}"
            );
            assert!(
                (analytic.residual_inner - numeric.residual_inner).abs() < 1e-7,
                "inner residual: {ctx}"
            );
            assert!(
                (analytic.conclusion_l1_residual - numeric.conclusion_l1_residual).abs() < 1e-7,
                "conclusion residual: {ctx}"
            );
            assert_eq!(analytic.verdicts.overall, numeric.verdicts.overall, "{ctx}");
        }
    }
}

#[test]
fn eigenvalue_and_eigenfunction_dispatch_to_the_matrix_backend_for_coupled() {
    let opts = SolverOptions::default();
    let q = Potential::cosine(1);
    let bc = BoundaryCondition::periodic();
    let lambda = solver::eigenvalue(&q, &bc, 1, &opts).unwrap();
    let pair = solver::eigenfunction(&q, &bc, lambda, &opts).unwrap();
    assert_eq!(pair.backend, Backend::Matrix);
    assert!((pair.eigenvalue - lambda).abs() < 1e-9);

    // a value strictly between eigenvalues is rejected
    let err = solver::eigenfunction(&q, &bc, lambda + 3.0, &opts).unwrap_err();
    assert!(matches!(err, slspec_core::Error::Usage(_)));
}

#[test]
fn degenerate_periodic_checks_use_the_better_eigenvector() {
    // the inner-product hypothesis on a degenerate pair is evaluated for
    // both eigenvectors; a constant difference passes for either, and the
    // report carries the flag
    let opts = CheckOptions::default();
    let qt = Potential::zero();
    let report = check_main(&qt.shift(-1.5), &qt, &BoundaryCondition::periodic(), 3, &opts)
        .unwrap();
    assert!(report.degenerate);
    assert!(report.residual_inner < 1e-6);
    assert_eq!(report.backend, Backend::Matrix);
}

#[test]
fn classic_check_matches_neumann_ground_state_shift() {
    // lambda_0(c) = c for a constant potential: the classic hypothesis is
    // the exact identity lambda_0 = integral(q)
    let opts = CheckOptions::default();
    let report = slspec_core::ambarzumyan::check_classic(&Potential::constant(-7.25), &opts)
        .unwrap();
    assert!((report.delta + 7.25).abs() < 1e-7);
    assert!((report.inner_product_value + 7.25).abs() < 1e-9);
}

#[test]
fn first_condition_against_nonzero_reference() {
    // a genuinely two-potential fixture: qt = cos(2 pi x), q = qt shifted;
    // the reference eigenfunction comes from the perturbed problem, not
    // the free one
    let opts = CheckOptions::default();
    let qt = Potential::cosine(1);
    for n in 1..=2usize {
        let c = check_first_condition(
            &qt.shift(PI),
            &qt,
            &BoundaryCondition::dirichlet(),
            n,
            &opts,
        )
        .unwrap();
        assert!((c.delta - PI).abs() < 1e-7, "n={n}: {}", c.delta);
        assert!(c.residual < 1e-7);
        assert!(!c.degenerate);
    }
}
