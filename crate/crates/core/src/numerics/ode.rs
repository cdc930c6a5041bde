//! Embedded adaptive Runge-Kutta integration (Dormand-Prince 5(4)).
//!
//! The integrator advances a small fixed-size state over a bounded interval
//! with standard PI-free step control. Callers may force step boundaries at
//! prescribed interior points (`stops`), which keeps the order of the method
//! intact across discontinuities of the right-hand side and doubles as a
//! dense-output mechanism: with `record_stops` the solution is returned at
//! every stop.

use crate::error::{Error, Result};

/// Tolerances and limits for [`integrate`].
#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 1_000_000,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Clone, Debug)]
pub struct OdeSolution<const N: usize> {
    /// State at the right end of the interval.
    pub end: [f64; N],
    /// `(x, state)` at every requested stop (including both interval ends)
    /// when recording was enabled; empty otherwise.
    pub samples: Vec<(f64, [f64; N])>,
    /// Accepted step count.
    pub steps: usize,
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 + 92097.0 / 339200.0;
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn saxpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// One Dormand-Prince step from `(x, y)` with step `h`.
///
/// Returns the fifth-order solution, the embedded error vector and the
/// last stage derivative (FSAL).
fn dp_step<const N: usize>(
    rhs: &impl Fn(f64, &[f64; N]) -> [f64; N],
    x: f64,
    y: &[f64; N],
    h: f64,
    k1: &[f64; N],
) -> ([f64; N], [f64; N], [f64; N]) {
    let k2 = rhs(x + C2 * h, &saxpy(y, h, &[(A21, k1)]));
    let k3 = rhs(x + C3 * h, &saxpy(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = rhs(x + C4 * h, &saxpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = rhs(
        x + C5 * h,
        &saxpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    );
    let k6 = rhs(
        x + h,
        &saxpy(
            y,
            h,
            &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ),
    );
    let y5 = saxpy(y, h, &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = rhs(x + h, &y5);
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h
            * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (y5, err, k7)
}

/// Integrates `y' = rhs(x, y)` from `span.0` to `span.1`.
///
/// `stops` lists interior points the stepper must land on exactly (sorted
/// ascending; values outside the open interval are ignored). Deterministic:
/// the same inputs always produce the same step sequence.
pub fn integrate<const N: usize>(
    rhs: impl Fn(f64, &[f64; N]) -> [f64; N],
    span: (f64, f64),
    y0: [f64; N],
    stops: &[f64],
    record_stops: bool,
    opts: &OdeOptions,
) -> Result<OdeSolution<N>> {
    let (x0, x1) = span;
    if !(x1 > x0) {
        return Err(Error::Usage(format!("bad integration span [{x0}, {x1}]")));
    }
    if !(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0) {
        return Err(Error::Usage("tolerances must be positive".into()));
    }
    let mut boundaries = Vec::with_capacity(stops.len() + 2);
    boundaries.push(x0);
    for &s in stops {
        if s > x0 && s < x1 && *boundaries.last().unwrap() < s {
            boundaries.push(s);
        }
    }
    boundaries.push(x1);

    let span_len = x1 - x0;
    let h_min = span_len * 1e-15;
    let mut samples = Vec::new();
    if record_stops {
        samples.push((x0, y0));
    }
    let mut y = y0;
    let mut steps = 0usize;
    let mut h = span_len / 100.0;

    for seg in boundaries.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let mut x = a;
        let mut k1 = rhs(x, &y);
        while x < b {
            if b - x <= h_min {
                break; // below floating-point resolution; snap to the boundary
            }
            if steps >= opts.max_steps {
                return Err(Error::Numerical {
                    context: "ode",
                    details: format!(
                        "step budget {} exhausted at x = {x} (rel_tol {}, abs_tol {})",
                        opts.max_steps, opts.rel_tol, opts.abs_tol
                    ),
                });
            }
            let h_try = h.min(b - x).max(h_min);
            let (y_new, err, k7) = dp_step(&rhs, x, &y, h_try, &k1);
            let mut raw: f64 = 0.0;
            // A step whose error sits within a few ulps of the state is at
            // the roundoff floor and cannot be improved by shrinking; this
            // happens on the tiny forced steps that land on breakpoints.
            let mut at_roundoff_floor = true;
            for i in 0..N {
                let mag = y[i].abs().max(y_new[i].abs());
                let scale = opts.abs_tol + opts.rel_tol * mag;
                raw += (err[i] / scale).powi(2);
                if err[i].abs() > 128.0 * f64::EPSILON * mag.max(opts.abs_tol) {
                    at_roundoff_floor = false;
                }
            }
            let raw = (raw / N as f64).sqrt();
            // error-per-unit-step: local budgets proportional to the step
            // size keep the accumulated error near the tolerance no matter
            // how many steps the interval needs
            let ratio = raw * span_len / h_try;
            if !ratio.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                return Err(Error::Numerical {
                    context: "ode",
                    details: format!("non-finite state at x = {x}"),
                });
            }
            if ratio <= 1.0 || at_roundoff_floor {
                x += h_try;
                y = y_new;
                k1 = k7;
                steps += 1;
                let grow = if ratio == 0.0 || at_roundoff_floor {
                    5.0
                } else {
                    (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = h_try * grow;
            } else {
                let shrink = (0.9 * ratio.powf(-0.2)).clamp(0.1, 0.9);
                h = h_try * shrink;
                if h < h_min {
                    return Err(Error::Numerical {
                        context: "ode",
                        details: format!("step size underflow at x = {x}"),
                    });
                }
            }
        }
        if record_stops {
            samples.push((b, y));
        }
    }

    Ok(OdeSolution {
        end: y,
        samples,
        steps,
    })
}

/// Fixed-step fifth-order integration, mainly for convergence studies.
pub fn integrate_fixed<const N: usize>(
    rhs: impl Fn(f64, &[f64; N]) -> [f64; N],
    span: (f64, f64),
    y0: [f64; N],
    n_steps: usize,
) -> [f64; N] {
    let h = (span.1 - span.0) / n_steps as f64;
    let mut y = y0;
    let mut x = span.0;
    for _ in 0..n_steps {
        let k1 = rhs(x, &y);
        let (y_new, _, _) = dp_step(&rhs, x, &y, h, &k1);
        y = y_new;
        x += h;
    }
    y
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar(
    rhs: impl Fn(f64, f64) -> f64,
    span: (f64, f64),
    y0: f64,
    stops: &[f64],
    record_stops: bool,
    opts: &OdeOptions,
) -> Result<OdeSolution<1>> {
    integrate(
        |x, y: &[f64; 1]| [rhs(x, y[0])],
        span,
        [y0],
        stops,
        record_stops,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_slope() {
        let sol = integrate_scalar(|_, _| 1.0, (0.0, 1.0), 0.0, &[], false, &OdeOptions::default())
            .unwrap();
        assert!((sol.end[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_growth() {
        let sol =
            integrate_scalar(|_, y| y, (0.0, 1.0), 1.0, &[], false, &OdeOptions::default()).unwrap();
        assert!((sol.end[0] - std::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn step_budget_exhaustion_reports_numerical_error() {
        let opts = OdeOptions {
            max_steps: 3,
            ..OdeOptions::default()
        };
        let err = integrate_scalar(|x, _| (50.0 * x).cos() * 50.0, (0.0, 1.0), 0.0, &[], false, &opts)
            .unwrap_err();
        assert!(matches!(err, Error::Numerical { context: "ode", .. }));
    }

    #[test]
    fn records_at_requested_stops() {
        let stops = [0.25, 0.5, 0.75];
        let sol =
            integrate_scalar(|_, _| 2.0, (0.0, 1.0), 0.0, &stops, true, &OdeOptions::default())
                .unwrap();
        assert_eq!(sol.samples.len(), 5);
        for (x, y) in &sol.samples {
            assert!((y[0] - 2.0 * x).abs() < 1e-12);
        }
    }
}
