//! Direct Sturm-Liouville solver: indexed eigenvalues and L2-normalized
//! eigenfunctions of `-y'' + q y = lambda y` on (0, 1), via two independent
//! backends.
//!
//! The shooting backend integrates the Prufer angle equation and bisects
//! its monotone boundary mismatch; it handles every separated boundary
//! condition. The matrix backend discretizes with central second
//! differences and solves the symmetric (tridiagonal plus corners)
//! eigenproblem in-repo; it additionally covers the periodic and
//! antiperiodic coupled conditions, where double eigenvalues occur and are
//! listed twice.
//!
//! All solver entry points are pure functions of their inputs. `spectrum`
//! computes its eigenpairs in parallel (one task per index) when the
//! `parallel` feature is enabled; results are deterministic regardless of
//! scheduling.

pub mod matrix;
pub mod prufer;

use crate::error::{Error, Result};
use crate::numerics::quad;
use crate::numerics::ToleranceBundle;
use crate::parallel;
use crate::potential::Potential;
use std::f64::consts::PI;

/// Coupled self-adjoint endpoint conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoupledKind {
    /// `y(0) = y(1), y'(0) = y'(1)`
    Periodic,
    /// `y(0) = -y(1), y'(0) = -y'(1)`
    Antiperiodic,
}

/// Self-adjoint boundary conditions on (0, 1).
///
/// Separated conditions are parametrized by angles in `[0, pi)`:
/// `cos(alpha) y(0) - sin(alpha) y'(0) = 0` and
/// `cos(beta) y(1) - sin(beta) y'(1) = 0`, so `alpha = beta = 0` is
/// Dirichlet and `alpha = beta = pi/2` is Neumann.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryCondition {
    Separated { alpha: f64, beta: f64 },
    Coupled(CoupledKind),
}

impl BoundaryCondition {
    pub fn dirichlet() -> Self {
        BoundaryCondition::Separated {
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn neumann() -> Self {
        BoundaryCondition::Separated {
            alpha: PI / 2.0,
            beta: PI / 2.0,
        }
    }

    /// General separated condition from two angles in `[0, pi)`.
    pub fn robin(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..PI).contains(&alpha) || !(0.0..PI).contains(&beta) {
            return Err(Error::Usage(format!(
                "boundary angles must lie in [0, pi), got ({alpha}, {beta})"
            )));
        }
        Ok(BoundaryCondition::Separated { alpha, beta })
    }

    pub fn periodic() -> Self {
        BoundaryCondition::Coupled(CoupledKind::Periodic)
    }

    pub fn antiperiodic() -> Self {
        BoundaryCondition::Coupled(CoupledKind::Antiperiodic)
    }

    pub fn is_separated(&self) -> bool {
        matches!(self, BoundaryCondition::Separated { .. })
    }

    /// Documented constant `C(bc)` such that every eigenvalue satisfies
    /// `lambda >= ess_inf(q) - C(bc)`.
    ///
    /// Negative boundary terms of the quadratic form are controlled by the
    /// trace inequality `y(x0)^2 <= eps ||y'||^2 + (1 + 1/eps) ||y||^2`,
    /// which gives `C = G (1 + 2 G)` with
    /// `G = max(0, -cot alpha) + max(0, cot beta)`. Dirichlet and Neumann
    /// ends contribute nothing, as do the coupled conditions, so `C = 0`
    /// there.
    pub fn lower_bound_constant(&self) -> f64 {
        match self {
            BoundaryCondition::Coupled(_) => 0.0,
            BoundaryCondition::Separated { alpha, beta } => {
                let g0 = if *alpha == 0.0 {
                    0.0
                } else {
                    (-alpha.cos() / alpha.sin()).max(0.0)
                };
                let g1 = if *beta == 0.0 {
                    0.0
                } else {
                    (beta.cos() / beta.sin()).max(0.0)
                };
                let g = g0 + g1;
                g * (1.0 + 2.0 * g)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            BoundaryCondition::Separated { alpha, beta } => {
                if *alpha == 0.0 && *beta == 0.0 {
                    "dirichlet".into()
                } else if (*alpha - PI / 2.0).abs() < 1e-15 && (*beta - PI / 2.0).abs() < 1e-15 {
                    "neumann".into()
                } else {
                    format!("robin:{alpha},{beta}")
                }
            }
            BoundaryCondition::Coupled(CoupledKind::Periodic) => "periodic".into(),
            BoundaryCondition::Coupled(CoupledKind::Antiperiodic) => "antiperiodic".into(),
        }
    }
}

/// Which backend produced an eigenpair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Shooting,
    Matrix,
}

impl Backend {
    pub fn label(&self) -> &'static str {
        match self {
            Backend::Shooting => "shooting",
            Backend::Matrix => "matrix",
        }
    }
}

/// One eigenvalue with its normalized eigenfunction samples.
///
/// `index` is 0-based; for separated conditions it equals the interior
/// node count (Sturm oscillation). Samples live on a uniform grid over
/// `[0, 1]` and are normalized so that the composite-Simpson value of
/// `y^2` is 1 to machine accuracy, with the sign fixed by `y'(0) > 0`
/// (or `y(0) > 0` when `y(0) != 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub index: usize,
    pub eigenvalue: f64,
    pub eigenfunction: Vec<f64>,
    pub node_count: usize,
    pub backend: Backend,
}

impl EigenPair {
    /// Grid spacing of the eigenfunction samples.
    pub fn grid_step(&self) -> f64 {
        1.0 / (self.eigenfunction.len() - 1) as f64
    }

    /// Abscissa of sample `i`.
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.grid_step()
    }
}

/// Ordered eigenpairs of one `(q, bc)` problem.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    pub potential: Potential,
    pub boundary: BoundaryCondition,
    pub pairs: Vec<EigenPair>,
}

impl SpectralData {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.eigenvalue).collect()
    }
}

/// Solver-wide options.
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub tol: ToleranceBundle,
    /// Sample count of returned eigenfunctions (odd, >= 3).
    pub grid_size: usize,
    /// Interior mesh size of the matrix backend.
    pub matrix_n: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: ToleranceBundle::default(),
            // 2047 interior nodes put the matrix mesh exactly on the
            // default sample grid below.
            grid_size: 2049,
            matrix_n: 2047,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        self.tol.validate()?;
        if self.grid_size < 3 || self.grid_size % 2 == 0 {
            return Err(Error::Usage(format!(
                "grid_size must be odd and >= 3, got {}",
                self.grid_size
            )));
        }
        if self.matrix_n < 16 {
            return Err(Error::Usage(format!(
                "matrix_n must be >= 16, got {}",
                self.matrix_n
            )));
        }
        Ok(())
    }
}

/// The `k`-th eigenvalue (0-based), to absolute tolerance `opts.tol.root_tol`.
///
/// Separated conditions use the shooting backend; coupled conditions
/// dispatch to the matrix backend.
pub fn eigenvalue(
    q: &Potential,
    bc: &BoundaryCondition,
    k: usize,
    opts: &SolverOptions,
) -> Result<f64> {
    opts.validate()?;
    match bc {
        BoundaryCondition::Separated { .. } => prufer::eigenvalue_shooting(q, bc, k, &opts.tol),
        BoundaryCondition::Coupled(_) => {
            let values = matrix::matrix_eigenvalues(q, bc, opts.matrix_n, k)?;
            Ok(values[k])
        }
    }
}

/// Recovers the normalized eigenfunction for a previously computed
/// eigenvalue. Errors with an invalid-input message when `lambda` is not
/// an eigenvalue to solver tolerance.
pub fn eigenfunction(
    q: &Potential,
    bc: &BoundaryCondition,
    lambda: f64,
    opts: &SolverOptions,
) -> Result<EigenPair> {
    opts.validate()?;
    match bc {
        BoundaryCondition::Separated { .. } => {
            prufer::eigenfunction_shooting(q, bc, lambda, opts.grid_size, &opts.tol)
        }
        BoundaryCondition::Coupled(_) => {
            // Locate the eigenvalue in the matrix spectrum, then return the
            // matching pair.
            let probe = matrix::matrix_eigen(q, bc, opts.matrix_n, 50, opts.grid_size)?;
            let tol = 1e-6 * lambda.abs().max(1.0);
            probe
                .pairs
                .into_iter()
                .find(|p| (p.eigenvalue - lambda).abs() <= tol)
                .ok_or_else(|| {
                    Error::Usage(format!(
                        "{lambda} is not an eigenvalue of the coupled problem to tolerance {tol:e}"
                    ))
                })
        }
    }
}

/// Eigenpairs 0..=k_max, sorted by eigenvalue.
///
/// Separated problems compute one index per parallel task; coupled
/// problems run the matrix backend, which lists double eigenvalues twice.
pub fn spectrum(
    q: &Potential,
    bc: &BoundaryCondition,
    k_max: usize,
    opts: &SolverOptions,
) -> Result<SpectralData> {
    spectrum_impl(q, bc, k_max, opts, false)
}

/// Sequential variant of [`spectrum`], for benchmarks and determinism
/// checks. Produces identical results.
pub fn spectrum_seq(
    q: &Potential,
    bc: &BoundaryCondition,
    k_max: usize,
    opts: &SolverOptions,
) -> Result<SpectralData> {
    spectrum_impl(q, bc, k_max, opts, true)
}

fn spectrum_impl(
    q: &Potential,
    bc: &BoundaryCondition,
    k_max: usize,
    opts: &SolverOptions,
    force_seq: bool,
) -> Result<SpectralData> {
    opts.validate()?;
    match bc {
        BoundaryCondition::Separated { .. } => {
            let one = |k: usize| -> Result<EigenPair> {
                let lambda = prufer::eigenvalue_shooting(q, bc, k, &opts.tol)?;
                prufer::eigenfunction_shooting(q, bc, lambda, opts.grid_size, &opts.tol)
            };
            let results = if force_seq {
                parallel::map_indices_seq(k_max + 1, one)
            } else {
                parallel::map_indices(k_max + 1, one)
            };
            let mut pairs = Vec::with_capacity(k_max + 1);
            for r in results {
                pairs.push(r?);
            }
            Ok(SpectralData {
                potential: q.clone(),
                boundary: *bc,
                pairs,
            })
        }
        BoundaryCondition::Coupled(_) => {
            matrix::matrix_eigen(q, bc, opts.matrix_n, k_max, opts.grid_size)
        }
    }
}

/// Composite-Simpson value of `integral of w(x) y(x)^2 dx` for eigenfunction
/// samples `y` on their uniform grid.
///
/// The rule is applied panel by panel with one-sided weight evaluation at
/// panel edges, so a cell boundary of a piecewise-constant `w` landing on
/// a panel edge is read from the correct side. A cell boundary strictly
/// inside a panel splits the panel: the interpolating quadratic of `y^2`
/// is integrated piece by piece against the cell values, which reduces to
/// the plain Simpson panel whenever `w` is constant across it.
pub fn weighted_inner_product(w: &Potential, samples: &[f64]) -> f64 {
    let n = samples.len();
    debug_assert!(n % 2 == 1 && n >= 3);
    let h = 1.0 / (n - 1) as f64;
    let x_at = |i: usize| if i == n - 1 { 1.0 } else { i as f64 * h };
    let pieces = w.pieces();
    let mut total = 0.0;
    for p in (0..n - 2).step_by(2) {
        let (x0, x2) = (x_at(p), x_at(p + 2));
        let f0 = samples[p] * samples[p];
        let f1 = samples[p + 1] * samples[p + 1];
        let f2 = samples[p + 2] * samples[p + 2];
        let lo = pieces.partition_point(|b| *b <= x0);
        let hi = pieces.partition_point(|b| *b < x2);
        let interior = &pieces[lo..hi];
        if interior.is_empty() || !splits_matter(w, interior) {
            let g0 = w.eval_limit(x0, false) * f0;
            let g1 = w.eval_unchecked(x_at(p + 1)) * f1;
            let g2 = w.eval_limit(x2, true) * f2;
            total += (g0 + 4.0 * g1 + g2) * h / 3.0;
        } else {
            // coefficients of the quadratic through the three y^2 samples
            let c0 = f0;
            let c1 = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
            let c2 = (f0 - 2.0 * f1 + f2) / (2.0 * h * h);
            let quad_int = |a: f64, b: f64| {
                let (ta, tb) = (a - x0, b - x0);
                c0 * (tb - ta)
                    + c1 * (tb * tb - ta * ta) / 2.0
                    + c2 * (tb * tb * tb - ta * ta * ta) / 3.0
            };
            let mut cuts = vec![x0];
            cuts.extend_from_slice(interior);
            cuts.push(x2);
            for seg in cuts.windows(2) {
                let mid = 0.5 * (seg[0] + seg[1]);
                total += w.eval_unchecked(mid) * quad_int(seg[0], seg[1]);
            }
        }
    }
    total
}

/// A split is only needed when the weight actually jumps inside the panel
/// (a piecewise-constant component); smooth kinks integrate fine.
fn splits_matter(w: &Potential, interior: &[f64]) -> bool {
    interior
        .iter()
        .any(|b| (w.eval_limit(*b, true) - w.eval_limit(*b, false)).abs() > 0.0)
}

/// Interior sign changes of eigenfunction samples, ignoring one grid cell
/// at each endpoint so boundary zeros are not miscounted.
pub fn node_count(samples: &[f64]) -> usize {
    let n = samples.len();
    if n < 4 {
        return 0;
    }
    let max_abs = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max_abs == 0.0 {
        return 0;
    }
    let threshold = 1e-9 * max_abs;
    let mut count = 0usize;
    let mut last_sign = 0i8;
    // guard band: skip the first and last interior cell
    for &v in &samples[1..n - 1] {
        if v.abs() <= threshold {
            continue;
        }
        let sign = if v > 0.0 { 1 } else { -1 };
        if last_sign != 0 && sign != last_sign {
            count += 1;
        }
        last_sign = sign;
    }
    count
}

/// Discrete-Simpson renormalization: scales samples so the composite
/// Simpson value of `y^2` is exactly 1, and fixes the sign convention
/// (first significant sample positive, i.e. `y(0) > 0` or `y'(0) > 0`).
pub fn normalize_eigenfunction(samples: &mut [f64]) -> Result<()> {
    let h = 1.0 / (samples.len() - 1) as f64;
    let sq: Vec<f64> = samples.iter().map(|y| y * y).collect();
    let norm2 = quad::simpson_samples(&sq, h)?;
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return Err(Error::Numerical {
            context: "normalization",
            details: format!("non-positive norm {norm2}"),
        });
    }
    let inv = 1.0 / norm2.sqrt();
    for y in samples.iter_mut() {
        *y *= inv;
    }
    let max_abs = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(first) = samples.iter().find(|v| v.abs() > 1e-8 * max_abs) {
        if *first < 0.0 {
            for y in samples.iter_mut() {
                *y = -*y;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bc_constructors_and_validation() {
        assert!(BoundaryCondition::robin(0.5, 3.0).is_ok());
        assert!(BoundaryCondition::robin(-0.1, 0.5).is_err());
        assert!(BoundaryCondition::robin(0.5, PI).is_err());
        assert_eq!(BoundaryCondition::dirichlet().describe(), "dirichlet");
        assert_eq!(BoundaryCondition::neumann().describe(), "neumann");
        assert_eq!(BoundaryCondition::periodic().describe(), "periodic");
    }

    #[test]
    fn lower_bound_constant_vanishes_for_classic_conditions() {
        assert_eq!(BoundaryCondition::dirichlet().lower_bound_constant(), 0.0);
        // cot(pi/2) is zero only up to the rounding of pi/2 itself
        assert!(BoundaryCondition::neumann().lower_bound_constant() < 1e-15);
        assert_eq!(BoundaryCondition::periodic().lower_bound_constant(), 0.0);
        // alpha = beta = pi/4: only the right end contributes, G = 1, C = 3
        let robin = BoundaryCondition::robin(PI / 4.0, PI / 4.0).unwrap();
        assert!((robin.lower_bound_constant() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn node_count_on_reference_shapes() {
        let grid = 2049usize;
        let sample = |f: &dyn Fn(f64) -> f64| -> Vec<f64> {
            (0..grid).map(|i| f(i as f64 / (grid - 1) as f64)).collect()
        };
        let sin1 = sample(&|x| (PI * x).sin() * std::f64::consts::SQRT_2);
        assert_eq!(node_count(&sin1), 0);
        let sin3 = sample(&|x| (3.0 * PI * x).sin() * std::f64::consts::SQRT_2);
        assert_eq!(node_count(&sin3), 2);
        let flat = sample(&|_| 1.0);
        assert_eq!(node_count(&flat), 0);
    }

    #[test]
    fn weighted_inner_product_of_normalized_function_is_one() {
        let grid = 2049usize;
        let mut y: Vec<f64> = (0..grid)
            .map(|i| (PI * i as f64 / (grid - 1) as f64).sin())
            .collect();
        normalize_eigenfunction(&mut y).unwrap();
        let one = weighted_inner_product(&Potential::constant(1.0), &y);
        assert!((one - 1.0).abs() < 1e-14);
    }
}
