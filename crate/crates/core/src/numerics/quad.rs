//! Composite Simpson quadrature with Richardson error estimation.

use crate::error::{Error, Result};

/// Quadrature value together with a Richardson error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
}

fn simpson_value(f: &impl Fn(f64) -> f64, a: f64, b: f64, n_nodes: usize) -> f64 {
    debug_assert!(n_nodes >= 3 && n_nodes % 2 == 1);
    let h = (b - a) / (n_nodes - 1) as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n_nodes - 1 {
        let x = a + i as f64 * h;
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(x);
    }
    sum * h / 3.0
}

/// Composite Simpson rule on `n_nodes` uniform nodes over `[a, b]`.
///
/// `n_nodes` must be odd and at least 3. The error estimate compares the
/// rule against its half-resolution version (fourth-order Richardson),
/// with a roundoff floor so it never claims better than machine accuracy.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n_nodes: usize) -> Result<QuadResult> {
    if n_nodes < 3 || n_nodes % 2 == 0 {
        return Err(Error::Usage(format!(
            "simpson requires an odd node count >= 3, got {n_nodes}"
        )));
    }
    if !a.is_finite() || !b.is_finite() || b < a {
        return Err(Error::Usage(format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
        });
    }
    let value = simpson_value(&f, a, b, n_nodes);
    // Compare against half resolution when the node count nests (n ≡ 1 mod 4),
    // otherwise against double resolution.
    let diff = if (n_nodes - 1) % 4 == 0 && n_nodes >= 5 {
        let coarse = simpson_value(&f, a, b, n_nodes.div_ceil(2));
        (value - coarse).abs() / 15.0
    } else {
        let fine = simpson_value(&f, a, b, 2 * n_nodes - 1);
        (value - fine).abs() * 16.0 / 15.0
    };
    let floor = f64::EPSILON * value.abs().max(b - a);
    Ok(QuadResult {
        value,
        error_estimate: diff.max(floor),
    })
}

/// Composite Simpson over samples on a uniform grid of spacing `h`.
///
/// The sample count must be odd and at least 3.
pub fn simpson_samples(values: &[f64], h: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::Usage(format!(
            "simpson_samples requires an odd sample count >= 3, got {n}"
        )));
    }
    let mut sum = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        sum += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    Ok(sum * h / 3.0)
}

/// Simpson rule applied piecewise between `pieces` (sorted, including both
/// endpoints), doubling the per-piece resolution until the Richardson
/// estimate drops below `target` or the refinement cap is reached.
///
/// Aligning panels with the pieces keeps the composite rule at full order
/// when the integrand is only piecewise smooth (cell boundaries of a
/// piecewise-constant potential, kinks of a linear interpolant).
pub fn simpson_adaptive(
    f: impl Fn(f64) -> f64,
    pieces: &[f64],
    target: f64,
) -> Result<QuadResult> {
    if pieces.len() < 2 {
        return Err(Error::Usage("need at least two piece boundaries".into()));
    }
    for w in pieces.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Usage("piece boundaries must be strictly increasing".into()));
        }
    }
    let n_pieces = pieces.len() - 1;
    // Start small for many-piece integrands, at the default 2049-node
    // resolution for a single smooth piece.
    let mut per_piece: usize = if n_pieces == 1 { 2048 } else { 4 };
    let cap_total: usize = 1 << 22;
    let eval = |per: usize| -> f64 {
        pieces
            .windows(2)
            .map(|w| simpson_value(&f, w[0], w[1], per + 1))
            .sum()
    };
    let mut prev = eval(per_piece);
    loop {
        per_piece *= 2;
        let cur = eval(per_piece);
        let est = (cur - prev).abs() / 15.0;
        let span = pieces[n_pieces] - pieces[0];
        let floor = f64::EPSILON * cur.abs().max(span);
        if est <= target || per_piece.saturating_mul(n_pieces) >= cap_total {
            return Ok(QuadResult {
                value: cur,
                error_estimate: est.max(floor),
            });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_exact() {
        let r = simpson(|_| 1.0, 0.0, 1.0, 3).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn cubic_is_exact() {
        // Simpson integrates cubics exactly.
        let r = simpson(|x| x * x, 0.0, 1.0, 3).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-15);
        let r3 = simpson(|x| x * x * x, 0.0, 1.0, 5).unwrap();
        assert!((r3.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn sin_squared_at_default_resolution() {
        let r = simpson(|x| (std::f64::consts::PI * x).sin().powi(2), 0.0, 1.0, 2049).unwrap();
        assert!((r.value - 0.5).abs() < 1e-10);
        assert!(r.error_estimate < 1e-10);
    }

    #[test]
    fn even_node_count_rejected() {
        assert!(simpson(|_| 1.0, 0.0, 1.0, 4).is_err());
        assert!(simpson_samples(&[1.0, 1.0], 0.5).is_err());
    }

    #[test]
    fn estimates_are_conservative_on_smooth_integrands() {
        // True error must stay below twice the reported estimate once the
        // rule is in its asymptotic regime.
        type Case = (fn(f64) -> f64, f64);
        let cases: [Case; 3] = [
            (|x| (std::f64::consts::PI * x).sin().powi(2), 0.5),
            (|x| (2.0 * std::f64::consts::PI * x).cos().powi(2), 0.5),
            (|x| x.exp(), std::f64::consts::E - 1.0),
        ];
        for (f, exact) in cases {
            for n in [65usize, 129, 257] {
                let r = simpson(f, 0.0, 1.0, n).unwrap();
                let true_err = (r.value - exact).abs();
                assert!(
                    true_err <= 2.0 * r.error_estimate,
                    "true {true_err:e} vs estimate {:e} at n={n}",
                    r.error_estimate
                );
            }
        }
    }

    #[test]
    fn piecewise_alignment_recovers_full_order() {
        // |x - 0.5| integrated with a panel boundary at the kink is exact.
        let r = simpson_adaptive(|x| (x - 0.5).abs(), &[0.0, 0.5, 1.0], 1e-12).unwrap();
        assert!((r.value - 0.25).abs() < 1e-14);
    }
}
