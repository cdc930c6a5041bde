//! Bracketing bisection for monotone scalar functions.

use crate::error::{Error, Result};

/// Bisects a monotone function to a root inside `bracket`.
///
/// Requires `g(lo) * g(hi) <= 0`. The returned point is the centre of the
/// final bracket, so it is within `tol` of the root. Uses at most
/// `ceil(log2((hi - lo) / tol))` midpoint evaluations after the two
/// endpoint evaluations that validate the bracket.
pub fn bisect_monotone(
    g: impl Fn(f64) -> f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Usage(format!("invalid bracket ({lo}, {hi})")));
    }
    if !(tol > 0.0) {
        return Err(Error::Usage(format!("tolerance must be positive, got {tol}")));
    }
    let g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo * g_hi > 0.0 {
        return Err(Error::Usage(format!(
            "bracket does not straddle a root: g({lo}) = {g_lo}, g({hi}) = {g_hi}"
        )));
    }
    let increasing = g_lo < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // hit floating-point resolution
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if (gm < 0.0) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
