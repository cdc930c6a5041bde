//! Symmetric tridiagonal eigensolver (Sturm-sequence bisection plus
//! inverse iteration), with optional corner coupling for periodic-type
//! discretizations.
//!
//! A corner entry `c` couples the first and last unknowns, so the matrix is
//! tridiagonal except for `M[0][n-1] = M[n-1][0] = c`. Both the inertia
//! count and the linear solves use a symmetric LDL^T elimination in which
//! the corner produces a single fill-in column; the extra work stays O(n).

use crate::error::{Error, Result};
use crate::parallel;

/// Symmetric tridiagonal matrix, optionally with corner coupling.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiag {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
    pub corner: Option<f64>,
}

impl SymTridiag {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        Self::build(diagonal, off_diagonal, None)
    }

    pub fn with_corner(diagonal: Vec<f64>, off_diagonal: Vec<f64>, corner: f64) -> Result<Self> {
        Self::build(diagonal, off_diagonal, Some(corner))
    }

    fn build(diagonal: Vec<f64>, off_diagonal: Vec<f64>, corner: Option<f64>) -> Result<Self> {
        let n = diagonal.len();
        if n < 2 {
            return Err(Error::Usage(format!("matrix order must be >= 2, got {n}")));
        }
        if off_diagonal.len() != n - 1 {
            return Err(Error::Usage(format!(
                "off-diagonal length {} does not match order {n}",
                off_diagonal.len()
            )));
        }
        let finite = diagonal.iter().chain(off_diagonal.iter()).all(|v| v.is_finite())
            && corner.is_none_or(|c| c.is_finite());
        if !finite {
            return Err(Error::Usage("matrix entries must be finite".into()));
        }
        Ok(Self {
            diagonal,
            off_diagonal,
            corner,
        })
    }

    pub fn n(&self) -> usize {
        self.diagonal.len()
    }

    /// Interval guaranteed to contain the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let c = self.corner.unwrap_or(0.0).abs();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.off_diagonal[i - 1].abs();
            }
            if i + 1 < n {
                radius += self.off_diagonal[i].abs();
            }
            if i == 0 || i == n - 1 {
                radius += c;
            }
            lo = lo.min(self.diagonal[i] - radius);
            hi = hi.max(self.diagonal[i] + radius);
        }
        (lo, hi)
    }

    fn magnitude(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(1.0)
    }

    /// Number of eigenvalues strictly below `sigma` (Sylvester inertia of
    /// the shifted LDL^T pivots). Near-zero pivots are treated as negative,
    /// which keeps the count function monotone for bisection.
    pub fn count_below(&self, sigma: f64) -> usize {
        let n = self.n();
        let tiny = f64::MIN_POSITIVE.sqrt() * self.magnitude();
        let clamp = |p: f64| if p.abs() < tiny { -tiny } else { p };
        let mut negatives = 0usize;

        match self.corner {
            None => {
                let mut d = clamp(self.diagonal[0] - sigma);
                if d < 0.0 {
                    negatives += 1;
                }
                for i in 1..n {
                    let e = self.off_diagonal[i - 1];
                    d = clamp(self.diagonal[i] - sigma - e * e / d);
                    if d < 0.0 {
                        negatives += 1;
                    }
                }
            }
            Some(c) => {
                if n == 2 {
                    // Corner merges with the single off-diagonal entry.
                    let e = self.off_diagonal[0] + c;
                    let d0 = clamp(self.diagonal[0] - sigma);
                    if d0 < 0.0 {
                        negatives += 1;
                    }
                    let d1 = clamp(self.diagonal[1] - sigma - e * e / d0);
                    if d1 < 0.0 {
                        negatives += 1;
                    }
                    return negatives;
                }
                let mut d = clamp(self.diagonal[0] - sigma);
                if d < 0.0 {
                    negatives += 1;
                }
                let mut fill = c; // current entry in the last column
                let mut last = self.diagonal[n - 1] - sigma;
                for i in 1..n - 1 {
                    let e = self.off_diagonal[i - 1];
                    last -= fill * fill / d;
                    let next_fill = if i == n - 2 {
                        // merges with the tridiagonal entry below
                        self.off_diagonal[n - 2] - e * fill / d
                    } else {
                        -e * fill / d
                    };
                    d = clamp(self.diagonal[i] - sigma - e * e / d);
                    if d < 0.0 {
                        negatives += 1;
                    }
                    fill = next_fill;
                }
                last = clamp(last - fill * fill / d);
                if last < 0.0 {
                    negatives += 1;
                }
            }
        }
        negatives
    }

    /// The `k_max + 1` lowest eigenvalues, in nondecreasing order, each
    /// found by bisection on the Sturm count to absolute accuracy `tol`.
    pub fn eigenvalues_lowest(&self, k_max: usize, tol: f64) -> Result<Vec<f64>> {
        let n = self.n();
        if k_max >= n {
            return Err(Error::Usage(format!(
                "requested eigenvalue {k_max} of an order-{n} matrix"
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::Usage("tolerance must be positive".into()));
        }
        let (glo, ghi) = self.gershgorin();
        let mut values = parallel::map_indices(k_max + 1, |k| {
            let mut lo = glo;
            let mut hi = ghi;
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.count_below(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        });
        // Independent bisections can disagree by up to tol on multiple
        // eigenvalues; enforce the ordering invariant.
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(values)
    }

    /// Givens QR factorization of `self - shift*I`.
    ///
    /// Orthogonal eliminations make the shifted solve backward stable even
    /// when the shift sits on an interior eigenvalue, where an unpivoted
    /// LDL^T would amplify the corner fill chain. R keeps O(1) entries per
    /// row: two superdiagonals plus (with a corner) the last two columns.
    fn qr_factor(&self, shift: f64) -> QrFactor {
        let n = self.n();
        let mut rows: Vec<SparseRow> = (0..n)
            .map(|i| {
                let mut r = Vec::with_capacity(5);
                if i > 0 {
                    r.push((i - 1, self.off_diagonal[i - 1]));
                }
                r.push((i, self.diagonal[i] - shift));
                if i + 1 < n {
                    r.push((i + 1, self.off_diagonal[i]));
                }
                r
            })
            .collect();
        if let Some(c) = self.corner {
            if n == 2 {
                // corner merges with the single off-diagonal entry
                add_entry(&mut rows[0], 1, c);
                add_entry(&mut rows[1], 0, c);
            } else {
                add_entry(&mut rows[0], n - 1, c);
                add_entry(&mut rows[n - 1], 0, c);
            }
        }
        let mut rotations = Vec::with_capacity(2 * n);
        for col in 0..n - 1 {
            // rows below the pivot that still hold a nonzero in `col`:
            // the band row right underneath and (corner chain) the last row
            let mut candidates = [col + 1, n - 1];
            if candidates[0] == candidates[1] {
                candidates[1] = col + 1;
            }
            let mut seen = usize::MAX;
            for &r in &candidates {
                if r == seen || r <= col {
                    continue;
                }
                seen = r;
                let below = entry(&rows[r], col);
                if below == 0.0 {
                    continue;
                }
                let pivot = entry(&rows[col], col);
                let hyp = pivot.hypot(below);
                let (c, s) = if hyp == 0.0 {
                    (1.0, 0.0)
                } else {
                    (pivot / hyp, below / hyp)
                };
                let (new_pivot, new_lower) = rotate_rows(&rows[col], &rows[r], c, s);
                rows[col] = new_pivot;
                rows[r] = new_lower;
                rotations.push((col, r, c, s));
            }
        }
        QrFactor {
            rows,
            rotations,
            diag_floor: (f64::EPSILON * self.magnitude()).max(f64::MIN_POSITIVE.sqrt()),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diagonal[i] * v[i];
            if i > 0 {
                s += self.off_diagonal[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += self.off_diagonal[i] * v[i + 1];
            }
            out[i] = s;
        }
        if let Some(c) = self.corner {
            out[0] += c * v[n - 1];
            out[n - 1] += c * v[0];
        }
        out
    }

    /// One eigenvector by inverse iteration at `lambda`, orthogonalized
    /// against `ortho` (previously computed vectors of the same cluster).
    pub fn eigenvector(&self, lambda: f64, ortho: &[Vec<f64>]) -> Result<Vec<f64>> {
        let n = self.n();
        let scale = self.magnitude();
        // Per-cluster-member shift separation keeps repeated eigenvalues
        // from feeding inverse iteration the identical singular system.
        let shift = lambda + (ortho.len() as f64) * 1e-11 * scale;
        let factor = self.qr_factor(shift);
        let mut v = seeded_unit_vector(n, 0x5eed_5eed_u64 ^ (ortho.len() as u64));
        let mut last_residual = f64::INFINITY;
        for _ in 0..50 {
            let mut w = factor.solve(&v);
            orthogonalize(&mut w, ortho);
            let norm = l2_norm(&w);
            if !norm.is_finite() || norm == 0.0 {
                // Restart from a different seed direction.
                v = seeded_unit_vector(n, 0xabcd_ef01 ^ (ortho.len() as u64 + 7));
                continue;
            }
            for x in w.iter_mut() {
                *x /= norm;
            }
            let av = self.apply(&w);
            let mut res = 0.0;
            for i in 0..n {
                res += (av[i] - lambda * w[i]).powi(2);
            }
            let res = res.sqrt();
            v = w;
            if res <= 1e-10 * scale {
                return Ok(v);
            }
            last_residual = res;
        }
        Err(Error::Numerical {
            context: "inverse-iteration",
            details: format!(
                "no convergence after 50 iterations at lambda = {lambda} (residual {last_residual:e})"
            ),
        })
    }
}

fn entry(row: &[(usize, f64)], col: usize) -> f64 {
    row.iter()
        .find(|(c, _)| *c == col)
        .map(|(_, v)| *v)
        .unwrap_or(0.0)
}

fn add_entry(row: &mut Vec<(usize, f64)>, col: usize, value: f64) {
    match row.iter_mut().find(|(c, _)| *c == col) {
        Some((_, v)) => *v += value,
        None => {
            let pos = row.partition_point(|(c, _)| *c < col);
            row.insert(pos, (col, value));
        }
    }
}

/// Sparse matrix row: sorted `(column, value)` pairs.
type SparseRow = Vec<(usize, f64)>;

/// Applies one Givens rotation to two sparse rows, dropping the eliminated
/// leading entry of the lower row.
fn rotate_rows(
    pivot_row: &[(usize, f64)],
    lower_row: &[(usize, f64)],
    c: f64,
    s: f64,
) -> (SparseRow, SparseRow) {
    let mut cols: Vec<usize> = pivot_row
        .iter()
        .chain(lower_row.iter())
        .map(|(c, _)| *c)
        .collect();
    cols.sort_unstable();
    cols.dedup();
    let mut new_pivot = Vec::with_capacity(cols.len());
    let mut new_lower = Vec::with_capacity(cols.len());
    let lead = cols[0];
    for col in cols {
        let a = entry(pivot_row, col);
        let b = entry(lower_row, col);
        let p = c * a + s * b;
        let l = -s * a + c * b;
        if p != 0.0 || col == lead {
            new_pivot.push((col, p));
        }
        // the eliminated entry is exactly zero by construction
        if l != 0.0 && col != lead {
            new_lower.push((col, l));
        }
    }
    (new_pivot, new_lower)
}

struct QrFactor {
    /// upper-triangular R, one sparse row per index
    rows: Vec<SparseRow>,
    /// Givens sequence `(pivot_row, lower_row, c, s)` forming Q^T
    rotations: Vec<(usize, usize, f64, f64)>,
    diag_floor: f64,
}

impl QrFactor {
    /// Solves `(M - shift I) x = b`; near-zero diagonal entries of R are
    /// floored, which is what inverse iteration wants at a singular shift.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.rows.len();
        let mut y = b.to_vec();
        for &(p, r, c, s) in &self.rotations {
            let (yp, yr) = (y[p], y[r]);
            y[p] = c * yp + s * yr;
            y[r] = -s * yp + c * yr;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            let mut diag = 0.0;
            for &(col, val) in &self.rows[i] {
                if col == i {
                    diag = val;
                } else if col > i {
                    acc -= val * x[col];
                }
            }
            if diag.abs() < self.diag_floor {
                diag = self.diag_floor.copysign(if diag == 0.0 { 1.0 } else { diag });
            }
            x[i] = acc / diag;
        }
        x
    }
}

fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let dot: f64 = v.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
        for (x, y) in v.iter_mut().zip(b.iter()) {
            *x -= dot * y;
        }
    }
}

/// Deterministic pseudo-random unit vector (SplitMix64 stream).
fn seeded_unit_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut state = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    let mut v: Vec<f64> = (0..n)
        .map(|_| (next() >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
        .collect();
    let norm = l2_norm(&v);
    for x in v.iter_mut() {
        *x /= norm;
    }
    v
}

/// Full eigen decomposition of the lowest part of the spectrum.
#[derive(Clone, Debug)]
pub struct TridiagEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
}

/// Lowest `k_max + 1` eigenpairs. Eigenvalues come from Sturm bisection,
/// eigenvectors from inverse iteration with in-cluster orthogonalization,
/// normalized in the discrete l2 norm.
pub fn tridiag_eigen(m: &SymTridiag, k_max: usize) -> Result<TridiagEigen> {
    let tol = (1e-16 * m.magnitude()).max(1e-12);
    let eigenvalues = m.eigenvalues_lowest(k_max, tol)?;
    let cluster_tol = 1e-8 * m.magnitude();
    let mut eigenvectors: Vec<Vec<f64>> = Vec::with_capacity(eigenvalues.len());
    let mut cluster_start = 0usize;
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        if k > 0 && (lambda - eigenvalues[k - 1]).abs() > cluster_tol {
            cluster_start = k;
        }
        let ortho = &eigenvectors[cluster_start..k];
        let v = m.eigenvector(lambda, ortho)?;
        eigenvectors.push(v);
    }
    Ok(TridiagEigen {
        eigenvalues,
        eigenvectors,
    })
}
