//! Shared numerical kernels: adaptive Runge-Kutta integration, composite
//! Simpson quadrature, bracketing bisection, and a symmetric tridiagonal
//! eigensolver with optional corner coupling.

pub mod ode;
pub mod quad;
pub mod root;
pub mod tridiag;

use crate::error::{Error, Result};

/// Tolerance knobs threaded through the solver stack.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceBundle {
    /// Relative tolerance of the adaptive ODE integrator.
    pub ode_rel: f64,
    /// Absolute tolerance of the adaptive ODE integrator.
    pub ode_abs: f64,
    /// Target for adaptive quadratures.
    pub quad_target: f64,
    /// Absolute tolerance of eigenvalue bisection.
    pub root_tol: f64,
    /// Step budget of one ODE integration.
    pub max_steps: usize,
}

impl Default for ToleranceBundle {
    fn default() -> Self {
        Self {
            ode_rel: 1e-10,
            ode_abs: 1e-12,
            quad_target: 1e-11,
            root_tol: 1e-9,
            max_steps: 1_000_000,
        }
    }
}

impl ToleranceBundle {
    pub fn validate(&self) -> Result<()> {
        let positive = self.ode_rel > 0.0
            && self.ode_abs > 0.0
            && self.quad_target > 0.0
            && self.root_tol > 0.0;
        if !positive {
            return Err(Error::Usage("all tolerances must be positive".into()));
        }
        if self.max_steps < 1000 {
            return Err(Error::Usage(format!(
                "max_steps must be at least 1000, got {}",
                self.max_steps
            )));
        }
        Ok(())
    }

    pub fn ode_options(&self) -> ode::OdeOptions {
        ode::OdeOptions {
            rel_tol: self.ode_rel,
            abs_tol: self.ode_abs,
            max_steps: self.max_steps,
        }
    }
}

/// Fits `value(h) = limit + c_1 h^p_1 + c_2 h^p_2 + ...` through the given
/// `(h, value)` pairs and returns the extrapolated limit.
///
/// This is Richardson extrapolation in linear-system form, which works for
/// mesh widths that are not exact halvings. The number of samples must
/// equal `orders.len() + 1`.
pub fn richardson_fit(samples: &[(f64, f64)], orders: &[f64]) -> Result<f64> {
    let m = samples.len();
    if m != orders.len() + 1 {
        return Err(Error::Usage(format!(
            "richardson_fit needs {} samples for {} orders, got {m}",
            orders.len() + 1,
            orders.len()
        )));
    }
    // Row i: limit + sum_j c_j h_i^p_j = v_i
    let mut a = vec![vec![0.0; m + 1]; m];
    for (i, &(h, v)) in samples.iter().enumerate() {
        if !(h > 0.0) {
            return Err(Error::Usage("mesh widths must be positive".into()));
        }
        a[i][0] = 1.0;
        for (j, &p) in orders.iter().enumerate() {
            a[i][j + 1] = h.powf(p);
        }
        a[i][m] = v;
    }
    // Gaussian elimination with partial pivoting on the tiny system.
    for col in 0..m {
        let pivot_row = (col..m)
            .max_by(|&r1, &r2| a[r1][col].abs().partial_cmp(&a[r2][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot_row);
        let pivot = a[col][col];
        if pivot.abs() < 1e-300 {
            return Err(Error::Numerical {
                context: "richardson",
                details: "singular extrapolation system".into(),
            });
        }
        for row in 0..m {
            if row != col {
                let factor = a[row][col] / pivot;
                for idx in col..=m {
                    let v = a[col][idx];
                    a[row][idx] -= factor * v;
                }
            }
        }
    }
    Ok(a[0][m] / a[0][0])
}
