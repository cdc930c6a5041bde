//! Independent test oracles: closed forms and brute-force references that
//! never touch the implementation paths they validate.
#![allow(dead_code)] // each test target uses its own subset
#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;

/// Closed-form Prufer angle at `x` for constant `w = lambda - q`:
/// the angle equation has the explicit solution
/// `tan(theta) = tan(mu x + phi) / mu` (oscillatory regime) with the
/// branch count lifted continuously.
pub fn prufer_angle_constant(theta0: f64, w: f64, x: f64) -> f64 {
    let m0 = (theta0 / PI + 0.5).floor();
    let t0 = theta0 - m0 * PI; // in [-pi/2, pi/2)
    if w > 0.0 {
        let mu = w.sqrt();
        let phi = m0 * PI + (mu * t0.tan()).atan();
        let psi = mu * x + phi;
        let m = (psi / PI + 0.5).floor();
        m * PI + ((psi - m * PI).tan() / mu).atan()
    } else if w == 0.0 {
        m0 * PI + (t0.tan() + x).atan()
    } else {
        let nu = (-w).sqrt();
        let u0 = t0.tan();
        assert!(
            nu * u0.abs() < 1.0,
            "oracle restricted to the non-crossing branch"
        );
        let c0 = (nu * u0).atanh();
        m0 * PI + ((nu * x + c0).tanh() / nu).atan()
    }
}

/// Cyclic Jacobi eigenvalue iteration for small dense symmetric matrices.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..200 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        let scale: f64 = (0..n).map(|i| a[i][i].abs()).fold(1.0, f64::max);
        if off.sqrt() < 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    vals
}

/// Exact `integral of v cos(2 pi n x)` over `[a, b]` (one constant cell).
pub fn cell_cos_moment(v: f64, a: f64, b: f64, n: u32) -> f64 {
    let w = 2.0 * PI * n as f64;
    v * ((w * b).sin() - (w * a).sin()) / w
}

/// Exact `integral of v sin(2 pi n x)` over `[a, b]` (one constant cell).
pub fn cell_sin_moment(v: f64, a: f64, b: f64, n: u32) -> f64 {
    let w = 2.0 * PI * n as f64;
    v * ((w * a).cos() - (w * b).cos()) / w
}

/// Least-squares slope through `(x, y)` points.
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
