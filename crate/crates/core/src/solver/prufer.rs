//! Shooting backend based on the Prufer transformation.
//!
//! Writing `y = r sin(theta)`, `y' = r cos(theta)` turns the eigenvalue
//! equation into the scalar angle equation
//! `theta' = cos^2(theta) + (lambda - q) sin^2(theta)` with
//! `theta(0) = alpha`. The angle at the right endpoint is strictly
//! increasing in `lambda` and crosses the boundary target
//! `beta' + k pi` exactly at the k-th eigenvalue, so eigenvalues come from
//! bracketing plus bisection on a monotone mismatch. The radial equation
//! `(ln r)' = (1 + q - lambda) sin(theta) cos(theta)` recovers the
//! eigenfunction.

use super::{normalize_eigenfunction, Backend, BoundaryCondition, EigenPair};
use crate::error::{Error, Result};
use crate::numerics::ode;
use crate::numerics::root::bisect_monotone;
use crate::numerics::ToleranceBundle;
use crate::potential::Potential;
use std::f64::consts::PI;

/// The right-endpoint angle target folded into `(0, pi]`.
fn beta_target(beta: f64) -> f64 {
    if beta == 0.0 {
        PI
    } else {
        beta
    }
}

fn separated_angles(bc: &BoundaryCondition) -> Result<(f64, f64)> {
    match bc {
        BoundaryCondition::Separated { alpha, beta } => Ok((*alpha, *beta)),
        BoundaryCondition::Coupled(_) => Err(Error::Unsupported(
            "the shooting backend handles separated boundary conditions only".into(),
        )),
    }
}

/// Integrates the Prufer angle across `[0, 1]` and returns the signed
/// boundary mismatch `theta(1) - beta'` together with the interior node
/// count implied by the angle sweep.
///
/// The mismatch is strictly increasing in `lambda`; the k-th eigenvalue is
/// its root after subtracting `k pi`. Integration steps land exactly on
/// the breakpoints of piecewise potentials.
pub fn prufer_mismatch(
    q: &Potential,
    bc: &BoundaryCondition,
    lambda: f64,
    tol: &ToleranceBundle,
) -> Result<(f64, usize)> {
    let (alpha, beta) = separated_angles(bc)?;
    let theta1 = prufer_angle_at_one(q, alpha, lambda, tol)?;
    let mismatch = theta1 - beta_target(beta);
    Ok((mismatch, nodes_from_angle(theta1)))
}

fn prufer_angle_at_one(
    q: &Potential,
    alpha: f64,
    lambda: f64,
    tol: &ToleranceBundle,
) -> Result<f64> {
    let stops = q.pieces();
    let sol = ode::integrate(
        |x, th: &[f64; 1]| {
            let qv = q.eval_unchecked(x);
            let (s, c) = th[0].sin_cos();
            [c * c + (lambda - qv) * s * s]
        },
        (0.0, 1.0),
        [alpha],
        &stops,
        false,
        &tol.ode_options(),
    )?;
    Ok(sol.end[0])
}

/// Interior zeros of the solution: the number of multiples of `pi`
/// strictly below `theta(1)`, with an exact multiple (a boundary zero)
/// not counting itself.
fn nodes_from_angle(theta1: f64) -> usize {
    let t = theta1 / PI;
    let snap = 1e-8 * (1.0 + t.abs());
    let rounded = t.round();
    let count = if (t - rounded).abs() <= snap {
        rounded as i64 - 1
    } else {
        t.floor() as i64
    };
    count.max(0) as usize
}

/// Asymptotic eigenvalue seed: `(k pi + offsets)^2 + integral(q)`, where a
/// Dirichlet end contributes an angle offset of `pi/2`.
fn asymptotic_seed(q_mean: f64, alpha: f64, beta: f64, k: usize) -> f64 {
    let d0 = if alpha == 0.0 { PI / 2.0 } else { 0.0 };
    let d1 = if beta == 0.0 { PI / 2.0 } else { 0.0 };
    let mu = k as f64 * PI + d0 + d1;
    mu * mu + q_mean
}

const MAX_BRACKET_EXPANSIONS: usize = 64;

/// The `k`-th eigenvalue (0-based) of a separated problem by shooting:
/// geometric bracket expansion around the asymptotic seed, then bisection
/// on the monotone mismatch.
pub fn eigenvalue_shooting(
    q: &Potential,
    bc: &BoundaryCondition,
    k: usize,
    tol: &ToleranceBundle,
) -> Result<f64> {
    let (alpha, beta) = separated_angles(bc)?;
    tol.validate()?;
    let target_shift = k as f64 * PI;
    let g = |lambda: f64| -> Result<f64> {
        let (m, _) = prufer_mismatch(q, bc, lambda, tol)?;
        Ok(m - target_shift)
    };

    let seed = asymptotic_seed(q.integral(), alpha, beta, k);
    let mut width = 1.0_f64.max(0.05 * seed.abs());
    let mut lo = seed - width;
    let mut hi = seed + width;
    let mut g_lo = g(lo)?;
    let mut g_hi = g(hi)?;
    let mut budget = MAX_BRACKET_EXPANSIONS;
    while g_lo > 0.0 {
        if budget == 0 {
            return Err(Error::Search(format!(
                "no lower bracket for index {k} after {MAX_BRACKET_EXPANSIONS} expansions"
            )));
        }
        budget -= 1;
        width *= 2.0;
        lo = seed - width;
        g_lo = g(lo)?;
    }
    while g_hi < 0.0 {
        if budget == 0 {
            return Err(Error::Search(format!(
                "no upper bracket for index {k} after {MAX_BRACKET_EXPANSIONS} expansions"
            )));
        }
        budget -= 1;
        width *= 2.0;
        hi = seed + width;
        g_hi = g(hi)?;
    }

    // Bisection cannot thread Result through the closure; capture failures.
    let failure = std::cell::RefCell::new(None);
    let root = bisect_monotone(
        |lambda| match g(lambda) {
            Ok(v) => v,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                f64::NAN
            }
        },
        (lo, hi),
        tol.root_tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    root
}

/// Recovers the normalized eigenfunction at a converged eigenvalue by
/// integrating the full `(theta, ln r)` system with forced steps on the
/// sample grid, then renormalizing in the discrete Simpson norm.
pub fn eigenfunction_shooting(
    q: &Potential,
    bc: &BoundaryCondition,
    lambda: f64,
    grid_size: usize,
    tol: &ToleranceBundle,
) -> Result<EigenPair> {
    let (alpha, beta) = separated_angles(bc)?;
    if grid_size < 3 || grid_size % 2 == 0 {
        return Err(Error::Usage(format!(
            "grid_size must be odd and >= 3, got {grid_size}"
        )));
    }

    let h = 1.0 / (grid_size - 1) as f64;
    let mut stops: Vec<f64> = (1..grid_size - 1).map(|i| i as f64 * h).collect();
    stops.extend(q.pieces());
    stops.sort_by(|a, b| a.partial_cmp(b).unwrap());
    stops.dedup();

    let sol = ode::integrate(
        |x, state: &[f64; 2]| {
            let qv = q.eval_unchecked(x);
            let (s, c) = state[0].sin_cos();
            [
                c * c + (lambda - qv) * s * s,
                (1.0 + qv - lambda) * s * c,
            ]
        },
        (0.0, 1.0),
        [alpha, 0.0],
        &stops,
        true,
        &tol.ode_options(),
    )?;

    // Validate that lambda actually hits an eigenvalue: the final angle
    // must sit on the boundary target modulo pi.
    let theta1 = sol.end[0];
    let t = (theta1 - beta_target(beta)) / PI;
    let k = t.round();
    let angle_residual = (t - k).abs() * PI;
    if angle_residual > 1e-6 || k < 0.0 {
        return Err(Error::Usage(format!(
            "{lambda} is not an eigenvalue: boundary angle residual {angle_residual:.3e} rad"
        )));
    }

    // y = exp(rho) sin(theta), shifted by max(rho) for overflow safety.
    let rho_max = sol
        .samples
        .iter()
        .fold(f64::NEG_INFINITY, |m, (_, s)| m.max(s[1]));
    let grid_x: Vec<f64> = (0..grid_size)
        .map(|i| if i == grid_size - 1 { 1.0 } else { i as f64 * h })
        .collect();
    let mut samples = Vec::with_capacity(grid_size);
    let mut cursor = 0usize;
    for &x in &grid_x {
        while cursor < sol.samples.len() && sol.samples[cursor].0 < x {
            cursor += 1;
        }
        debug_assert!(cursor < sol.samples.len() && sol.samples[cursor].0 == x);
        let state = sol.samples[cursor].1;
        samples.push((state[1] - rho_max).exp() * state[0].sin());
    }

    normalize_eigenfunction(&mut samples)?;
    let nodes = super::node_count(&samples);
    Ok(EigenPair {
        index: k as usize,
        eigenvalue: lambda,
        eigenfunction: samples,
        node_count: nodes,
        backend: Backend::Shooting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI2: f64 = PI * PI;

    #[test]
    fn mismatch_vanishes_at_first_dirichlet_eigenvalue() {
        let tol = ToleranceBundle::default();
        let (m, nodes) = prufer_mismatch(
            &Potential::zero(),
            &BoundaryCondition::dirichlet(),
            PI2,
            &tol,
        )
        .unwrap();
        assert!(m.abs() < 1e-9, "mismatch {m}");
        assert_eq!(nodes, 0);
    }

    #[test]
    fn mismatch_is_negative_below_the_first_eigenvalue() {
        let tol = ToleranceBundle::default();
        let (m, _) = prufer_mismatch(
            &Potential::zero(),
            &BoundaryCondition::dirichlet(),
            2.0,
            &tol,
        )
        .unwrap();
        assert!(m < 0.0);
    }

    #[test]
    fn constant_shift_identity() {
        // mismatch(q = c, lambda) = mismatch(q = 0, lambda - c)
        let tol = ToleranceBundle::default();
        let bc = BoundaryCondition::robin(0.7, 2.1).unwrap();
        for (c, lambda) in [(3.0, 11.0), (-4.5, 2.0), (0.25, 40.0)] {
            let (a, _) = prufer_mismatch(&Potential::constant(c), &bc, lambda, &tol).unwrap();
            let (b, _) = prufer_mismatch(&Potential::zero(), &bc, lambda - c, &tol).unwrap();
            assert!((a - b).abs() < 1e-9, "c={c} lambda={lambda}: {a} vs {b}");
        }
    }

    #[test]
    fn coupled_bc_is_unsupported() {
        let tol = ToleranceBundle::default();
        let err = prufer_mismatch(
            &Potential::zero(),
            &BoundaryCondition::periodic(),
            1.0,
            &tol,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn free_dirichlet_and_neumann_eigenvalues() {
        let tol = ToleranceBundle::default();
        let l0 = eigenvalue_shooting(
            &Potential::zero(),
            &BoundaryCondition::dirichlet(),
            0,
            &tol,
        )
        .unwrap();
        assert!((l0 - PI2).abs() < 1e-8, "{l0} vs {PI2}");
        let n0 = eigenvalue_shooting(&Potential::zero(), &BoundaryCondition::neumann(), 0, &tol)
            .unwrap();
        assert!(n0.abs() < 1e-8, "{n0}");
    }

    #[test]
    fn eigenfunction_requires_an_actual_eigenvalue() {
        let tol = ToleranceBundle::default();
        let err = eigenfunction_shooting(
            &Potential::zero(),
            &BoundaryCondition::dirichlet(),
            8.0,
            129,
            &tol,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn free_dirichlet_ground_state_matches_sine() {
        let tol = ToleranceBundle::default();
        let pair = eigenfunction_shooting(
            &Potential::zero(),
            &BoundaryCondition::dirichlet(),
            PI2,
            513,
            &tol,
        )
        .unwrap();
        assert_eq!(pair.index, 0);
        assert_eq!(pair.node_count, 0);
        for (i, y) in pair.eigenfunction.iter().enumerate() {
            let x = pair.x(i);
            let exact = std::f64::consts::SQRT_2 * (PI * x).sin();
            assert!((y - exact).abs() < 1e-8, "x={x}: {y} vs {exact}");
        }
    }

    #[test]
    fn neumann_ground_state_is_constant_one() {
        let tol = ToleranceBundle::default();
        let pair = eigenfunction_shooting(
            &Potential::zero(),
            &BoundaryCondition::neumann(),
            0.0,
            129,
            &tol,
        )
        .unwrap();
        for y in &pair.eigenfunction {
            assert!((y - 1.0).abs() < 1e-9);
        }
    }
}
