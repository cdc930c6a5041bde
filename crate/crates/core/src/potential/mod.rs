//! Potentials q on (0, 1) and the integral functionals the uniqueness
//! checks need: integral, essential bounds, even Fourier coefficients and
//! the even/odd decomposition about the midpoint.
//!
//! Three base representations are supported: piecewise-constant cells,
//! uniformly sampled values with linear interpolation, and a small analytic
//! catalog (zero, `cos(2 pi k x)`, `sin(2 pi k x)`). Every potential also
//! carries an affine layer `scale * base(x) + offset`, so constant shifts
//! and scalar multiples stay exact for every representation. All values
//! are bounded and measurable by construction, which keeps `ess_inf` and
//! `ess_sup` computable from finite data; unbounded representations are
//! deliberately not expressible.

pub mod file;

use crate::error::{Error, Result};
use crate::numerics::quad::{self, QuadResult};
use std::f64::consts::TAU;

/// Analytic catalog entries (evaluated before the affine layer).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Waveform {
    /// Identically zero; `constant(c)` is this plus an offset.
    Zero,
    /// `cos(2 pi k x)`, `k >= 1`.
    Cos(u32),
    /// `sin(2 pi k x)`, `k >= 1`.
    Sin(u32),
}

impl Waveform {
    fn eval(self, x: f64) -> f64 {
        match self {
            Waveform::Zero => 0.0,
            Waveform::Cos(k) => (TAU * k as f64 * x).cos(),
            Waveform::Sin(k) => (TAU * k as f64 * x).sin(),
        }
    }

    /// Exact antiderivative over `[a, b]`.
    fn integral_on(self, a: f64, b: f64) -> f64 {
        match self {
            Waveform::Zero => 0.0,
            Waveform::Cos(k) => {
                let w = TAU * k as f64;
                ((w * b).sin() - (w * a).sin()) / w
            }
            Waveform::Sin(k) => {
                let w = TAU * k as f64;
                ((w * a).cos() - (w * b).cos()) / w
            }
        }
    }
}

/// Base representation of a potential, before the affine layer.
#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    /// Left-closed cells `[b_i, b_{i+1})` with the last cell closed;
    /// breakpoints are strictly increasing from 0 to 1. Cell boundary
    /// values carry zero measure, matching a.e. semantics.
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    /// Uniform samples on `[0, 1]` with linear interpolation. Linear
    /// interpolation cannot overshoot the data, so the essential bounds
    /// read off the samples exactly.
    Sampled { values: Vec<f64> },
    Analytic(Waveform),
    /// Exact linear combination of base representations. Produced by
    /// adding or subtracting potentials of different kinds; keeps
    /// evaluation, integrals and Fourier functionals exact (and linear)
    /// instead of resampling onto a lossy grid.
    Mix(Vec<(f64, Kind)>),
}

impl Kind {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Kind::PiecewiseConstant {
                breakpoints,
                values,
            } => {
                if x >= 1.0 {
                    return *values.last().unwrap();
                }
                // index of the cell with b_i <= x < b_{i+1}
                let idx = breakpoints.partition_point(|b| *b <= x) - 1;
                values[idx.min(values.len() - 1)]
            }
            Kind::Sampled { values } => {
                let m = values.len();
                let t = x * (m - 1) as f64;
                let i = (t.floor() as usize).min(m - 2);
                let frac = t - i as f64;
                values[i] * (1.0 - frac) + values[i + 1] * frac
            }
            Kind::Analytic(w) => w.eval(x),
            Kind::Mix(parts) => parts.iter().map(|(c, k)| c * k.eval(x)).sum(),
        }
    }

    /// One-sided limit; only piecewise-constant cells distinguish sides.
    fn eval_limit(&self, x: f64, from_left: bool) -> f64 {
        match self {
            Kind::PiecewiseConstant {
                breakpoints,
                values,
            } if from_left && x > 0.0 => {
                let idx = breakpoints.partition_point(|b| *b < x) - 1;
                values[idx.min(values.len() - 1)]
            }
            Kind::Mix(parts) => parts
                .iter()
                .map(|(c, k)| c * k.eval_limit(x, from_left))
                .sum(),
            _ => self.eval(x),
        }
    }

    fn integral_on(&self, a: f64, b: f64) -> f64 {
        match self {
            Kind::PiecewiseConstant {
                breakpoints,
                values,
            } => {
                let mut total = 0.0;
                for (i, v) in values.iter().enumerate() {
                    let lo = breakpoints[i].max(a);
                    let hi = breakpoints[i + 1].min(b);
                    if hi > lo {
                        total += v * (hi - lo);
                    }
                }
                total
            }
            Kind::Sampled { values } => {
                let m = values.len();
                let h = 1.0 / (m - 1) as f64;
                let mut total = 0.0;
                for i in 0..m - 1 {
                    let lo = (i as f64 * h).max(a);
                    let hi = ((i + 1) as f64 * h).min(b);
                    if hi > lo {
                        // exact integral of the linear interpolant
                        let mid = 0.5 * (lo + hi);
                        let t = mid * (m - 1) as f64 - i as f64;
                        let v_mid = values[i] * (1.0 - t) + values[i + 1] * t;
                        total += v_mid * (hi - lo);
                    }
                }
                total
            }
            Kind::Analytic(w) => w.integral_on(a, b),
            Kind::Mix(parts) => parts.iter().map(|(c, k)| c * k.integral_on(a, b)).sum(),
        }
    }

    fn bounds(&self) -> (f64, f64) {
        match self {
            Kind::PiecewiseConstant { values, .. } | Kind::Sampled { values } => {
                let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
            Kind::Analytic(Waveform::Zero) => (0.0, 0.0),
            Kind::Analytic(_) => (-1.0, 1.0),
            // no closed form for a cross-kind sum; scan each smooth piece
            Kind::Mix(_) => {
                let mut pieces = vec![0.0];
                pieces.extend(self.pieces());
                pieces.push(1.0);
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for w in pieces.windows(2) {
                    let m = 2048;
                    for i in 0..=m {
                        // bias endpoints into the piece so cell boundaries
                        // read their own side
                        let t = (i as f64 + 0.5) / (m as f64 + 1.0);
                        let v = self.eval(w[0] + t * (w[1] - w[0]));
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Interior points where the representation loses smoothness.
    fn pieces(&self) -> Vec<f64> {
        match self {
            Kind::PiecewiseConstant { breakpoints, .. } => {
                breakpoints[1..breakpoints.len() - 1].to_vec()
            }
            Kind::Sampled { values } => {
                let m = values.len();
                (1..m - 1).map(|i| i as f64 / (m - 1) as f64).collect()
            }
            Kind::Analytic(_) => Vec::new(),
            Kind::Mix(parts) => {
                let mut all: Vec<f64> = parts.iter().flat_map(|(_, k)| k.pieces()).collect();
                all.sort_by(|a, b| a.partial_cmp(b).unwrap());
                all.dedup();
                all
            }
        }
    }

    fn even_odd(&self) -> (Kind, Kind) {
        match self {
            Kind::Analytic(Waveform::Zero) => {
                (Kind::Analytic(Waveform::Zero), Kind::Analytic(Waveform::Zero))
            }
            // cos(2 pi k (1-x)) = cos(2 pi k x): even about the midpoint
            Kind::Analytic(Waveform::Cos(k)) => {
                (Kind::Analytic(Waveform::Cos(*k)), Kind::Analytic(Waveform::Zero))
            }
            // sin(2 pi k (1-x)) = -sin(2 pi k x): odd about the midpoint
            Kind::Analytic(Waveform::Sin(k)) => {
                (Kind::Analytic(Waveform::Zero), Kind::Analytic(Waveform::Sin(*k)))
            }
            Kind::Sampled { values } => {
                let m = values.len();
                let even = (0..m)
                    .map(|i| 0.5 * (values[i] + values[m - 1 - i]))
                    .collect();
                let odd = (0..m)
                    .map(|i| 0.5 * (values[i] - values[m - 1 - i]))
                    .collect();
                (Kind::Sampled { values: even }, Kind::Sampled { values: odd })
            }
            Kind::PiecewiseConstant { breakpoints, .. } => {
                // refine to a grid symmetric under x -> 1 - x
                let mut refined: Vec<f64> = breakpoints
                    .iter()
                    .cloned()
                    .chain(breakpoints.iter().map(|b| 1.0 - b))
                    .collect();
                refined.sort_by(|a, b| a.partial_cmp(b).unwrap());
                refined.dedup();
                refined.retain(|b| (0.0..=1.0).contains(b));
                let mut cells_even = Vec::with_capacity(refined.len() - 1);
                let mut cells_odd = Vec::with_capacity(refined.len() - 1);
                for w in refined.windows(2) {
                    let mid = 0.5 * (w[0] + w[1]);
                    let v = self.eval(mid);
                    let v_mirror = self.eval(1.0 - mid);
                    cells_even.push(0.5 * (v + v_mirror));
                    cells_odd.push(0.5 * (v - v_mirror));
                }
                (
                    Kind::PiecewiseConstant {
                        breakpoints: refined.clone(),
                        values: cells_even,
                    },
                    Kind::PiecewiseConstant {
                        breakpoints: refined,
                        values: cells_odd,
                    },
                )
            }
            Kind::Mix(parts) => {
                let mut evens = Vec::with_capacity(parts.len());
                let mut odds = Vec::with_capacity(parts.len());
                for (c, k) in parts {
                    let (e, o) = k.even_odd();
                    evens.push((*c, e));
                    odds.push((*c, o));
                }
                (Kind::Mix(evens), Kind::Mix(odds))
            }
        }
    }

    /// Weighted quadrature `integral of kind(x) f(x)` distributing over
    /// cells and mix components so discontinuities never bias panel
    /// endpoints.
    fn integrate_against(&self, f: &dyn Fn(f64) -> f64, target: f64) -> f64 {
        match self {
            Kind::PiecewiseConstant {
                breakpoints,
                values,
            } => {
                let per_cell = target / values.len() as f64;
                let mut total = 0.0;
                for (i, v) in values.iter().enumerate() {
                    if *v == 0.0 {
                        continue;
                    }
                    let weight = quad::simpson_adaptive(
                        f,
                        &[breakpoints[i], breakpoints[i + 1]],
                        per_cell / v.abs().max(1.0),
                    )
                    .expect("valid cell")
                    .value;
                    total += v * weight;
                }
                total
            }
            Kind::Mix(parts) => {
                let per_part = target / parts.len() as f64;
                parts
                    .iter()
                    .map(|(c, k)| c * k.integrate_against(f, per_part / c.abs().max(1.0)))
                    .sum()
            }
            _ => {
                let mut pieces = vec![0.0];
                pieces.extend(self.pieces());
                pieces.push(1.0);
                quad::simpson_adaptive(|x| self.eval(x) * f(x), &pieces, target)
                    .expect("valid piece list")
                    .value
            }
        }
    }
}

/// A real, bounded, measurable potential on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    kind: Kind,
    scale: f64,
    offset: f64,
}

/// Even/odd decomposition of a potential about `x = 1/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenOddParts {
    /// `e(x) = (q(x) + q(1-x)) / 2`
    pub even: Potential,
    /// `u(x) = (q(x) - q(1-x)) / 2`
    pub odd: Potential,
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Usage(format!("{what} must be finite")));
    }
    Ok(())
}

impl Potential {
    pub fn zero() -> Self {
        Self {
            kind: Kind::Analytic(Waveform::Zero),
            scale: 1.0,
            offset: 0.0,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            kind: Kind::Analytic(Waveform::Zero),
            scale: 1.0,
            offset: c,
        }
    }

    /// `cos(2 pi k x)` for `k >= 1`.
    pub fn cosine(k: u32) -> Self {
        assert!(k >= 1, "frequency index must be >= 1");
        Self {
            kind: Kind::Analytic(Waveform::Cos(k)),
            scale: 1.0,
            offset: 0.0,
        }
    }

    /// `sin(2 pi k x)` for `k >= 1`.
    pub fn sine(k: u32) -> Self {
        assert!(k >= 1, "frequency index must be >= 1");
        Self {
            kind: Kind::Analytic(Waveform::Sin(k)),
            scale: 1.0,
            offset: 0.0,
        }
    }

    pub fn piecewise_constant(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || values.len() + 1 != breakpoints.len() {
            return Err(Error::Usage(format!(
                "piecewise potential needs n+1 breakpoints for n cells, got {} and {}",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::Usage(
                "breakpoints must start at 0 and end at 1".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Usage("breakpoints must be strictly increasing".into()));
        }
        check_finite(&values, "cell values")?;
        Ok(Self {
            kind: Kind::PiecewiseConstant {
                breakpoints,
                values,
            },
            scale: 1.0,
            offset: 0.0,
        })
    }

    /// Uniform samples on `[0, 1]`, linearly interpolated. At least 3.
    pub fn sampled(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::Usage(format!(
                "sampled potential needs at least 3 points, got {}",
                values.len()
            )));
        }
        check_finite(&values, "samples")?;
        Ok(Self {
            kind: Kind::Sampled { values },
            scale: 1.0,
            offset: 0.0,
        })
    }

    /// Tabulated catalog entry; an alias for [`Potential::sampled`].
    pub fn from_table(values: Vec<f64>) -> Result<Self> {
        Self::sampled(values)
    }

    pub(crate) fn from_parts(kind: Kind, scale: f64, offset: f64) -> Result<Self> {
        if !scale.is_finite() || !offset.is_finite() {
            return Err(Error::Usage("scale and offset must be finite".into()));
        }
        // validate through the public constructors
        let base = match kind {
            Kind::PiecewiseConstant {
                breakpoints,
                values,
            } => Self::piecewise_constant(breakpoints, values)?,
            Kind::Sampled { values } => Self::sampled(values)?,
            Kind::Analytic(w) => {
                if let Waveform::Cos(0) | Waveform::Sin(0) = w {
                    return Err(Error::Usage("frequency index must be >= 1".into()));
                }
                Self {
                    kind: Kind::Analytic(w),
                    scale: 1.0,
                    offset: 0.0,
                }
            }
            Kind::Mix(_) => {
                return Err(Error::Usage(
                    "combination potentials cannot be constructed directly".into(),
                ))
            }
        };
        Ok(Self {
            kind: base.kind,
            scale,
            offset,
        })
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.kind
    }

    pub(crate) fn scale_factor(&self) -> f64 {
        self.scale
    }

    pub(crate) fn offset_value(&self) -> f64 {
        self.offset
    }

    /// Evaluates the potential at `x in [0, 1]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!(
                "evaluation point {x} outside [0, 1]"
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluation without the domain check; callers guarantee `x in [0, 1]`.
    #[inline]
    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        self.scale * self.kind.eval(x) + self.offset
    }

    /// One-sided limit at `x`: the value of the cell to the left or right.
    /// Only piecewise-constant cells distinguish the sides; quadrature
    /// panels use this so a cell boundary on a panel edge is read from the
    /// panel's own side.
    pub(crate) fn eval_limit(&self, x: f64, from_left: bool) -> f64 {
        self.scale * self.kind.eval_limit(x, from_left) + self.offset
    }

    /// `q + c`, exactly, for every representation.
    pub fn shift(&self, c: f64) -> Self {
        Self {
            kind: self.kind.clone(),
            scale: self.scale,
            offset: self.offset + c,
        }
    }

    /// `s * q`, exactly, for every representation.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            kind: self.kind.clone(),
            scale: self.scale * s,
            offset: self.offset * s,
        }
    }

    /// Pointwise difference `self - other`.
    ///
    /// Structurally identical bases and piecewise-constant pairs subtract
    /// exactly; mixed representations are resampled onto a refined uniform
    /// grid.
    pub fn subtract(&self, other: &Potential) -> Potential {
        self.combine(other, -1.0)
    }

    /// Pointwise sum `self + other` under the same representation rules as
    /// [`Potential::subtract`].
    pub fn add(&self, other: &Potential) -> Potential {
        self.combine(other, 1.0)
    }

    fn combine(&self, other: &Potential, sign: f64) -> Potential {
        let offset = self.offset + sign * other.offset;
        if self.kind == other.kind {
            let scale = self.scale + sign * other.scale;
            if scale == 0.0 {
                return Potential::constant(offset);
            }
            return Potential {
                kind: self.kind.clone(),
                scale,
                offset,
            };
        }
        match (&self.kind, &other.kind) {
            (_, Kind::Analytic(Waveform::Zero)) => Potential {
                kind: self.kind.clone(),
                scale: self.scale,
                offset,
            },
            (Kind::Analytic(Waveform::Zero), _) => Potential {
                kind: other.kind.clone(),
                scale: sign * other.scale,
                offset,
            },
            (
                Kind::PiecewiseConstant {
                    breakpoints: bp1,
                    values: v1,
                },
                Kind::PiecewiseConstant {
                    breakpoints: bp2,
                    values: v2,
                },
            ) => {
                let mut merged: Vec<f64> = bp1.iter().chain(bp2.iter()).cloned().collect();
                merged.sort_by(|a, b| a.partial_cmp(b).unwrap());
                merged.dedup();
                let k1 = Kind::PiecewiseConstant {
                    breakpoints: bp1.clone(),
                    values: v1.clone(),
                };
                let k2 = Kind::PiecewiseConstant {
                    breakpoints: bp2.clone(),
                    values: v2.clone(),
                };
                let cells = merged
                    .windows(2)
                    .map(|w| {
                        let mid = 0.5 * (w[0] + w[1]);
                        self.scale * k1.eval(mid) + sign * other.scale * k2.eval(mid)
                    })
                    .collect();
                Potential {
                    kind: Kind::PiecewiseConstant {
                        breakpoints: merged,
                        values: cells,
                    },
                    scale: 1.0,
                    offset,
                }
            }
            _ => {
                // Cross-kind combination: keep both operands exactly.
                let mut parts = flatten_mix(self.scale, &self.kind);
                parts.extend(flatten_mix(sign * other.scale, &other.kind));
                parts.retain(|(c, _)| *c != 0.0);
                if parts.is_empty() {
                    return Potential::constant(offset);
                }
                Potential {
                    kind: Kind::Mix(parts),
                    scale: 1.0,
                    offset,
                }
            }
        }
    }

    /// Integral over `[0, 1]`: exact cell sums for piecewise-constant
    /// potentials, composite Simpson with a Richardson error estimate for
    /// the rest.
    pub fn integral(&self) -> f64 {
        self.integral_with_estimate().value
    }

    pub fn integral_with_estimate(&self) -> QuadResult {
        match &self.kind {
            // exact per-representation antiderivatives
            Kind::PiecewiseConstant { .. } | Kind::Mix(_) => QuadResult {
                value: self.integral_on(0.0, 1.0),
                error_estimate: 0.0,
            },
            _ => {
                let pieces = self.quad_pieces();
                quad::simpson_adaptive(|x| self.eval_unchecked(x), &pieces, 1e-12)
                    .expect("valid piece list")
            }
        }
    }

    /// Exact integral over a subinterval, via per-representation
    /// antiderivatives. Used by the matrix backend for cell averages.
    pub fn integral_on(&self, a: f64, b: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) && a <= b);
        self.scale * self.kind.integral_on(a, b) + self.offset * (b - a)
    }

    /// Essential infimum. Exact for every supported representation:
    /// cell/sample minima or the closed-form waveform bound.
    pub fn ess_inf(&self) -> f64 {
        let (lo, hi) = self.kind.bounds();
        if self.scale >= 0.0 {
            self.scale * lo + self.offset
        } else {
            self.scale * hi + self.offset
        }
    }

    /// Essential supremum; see [`Potential::ess_inf`].
    pub fn ess_sup(&self) -> f64 {
        let (lo, hi) = self.kind.bounds();
        if self.scale >= 0.0 {
            self.scale * hi + self.offset
        } else {
            self.scale * lo + self.offset
        }
    }

    /// Quadrature panels aligned with the representation's smooth pieces.
    pub(crate) fn quad_pieces(&self) -> Vec<f64> {
        let mut pieces = vec![0.0];
        pieces.extend(self.kind.pieces());
        pieces.push(1.0);
        pieces
    }

    /// Interior smoothness breakpoints (empty for analytic entries).
    pub fn pieces(&self) -> Vec<f64> {
        self.kind.pieces()
    }

    /// Composite-Simpson value of `integral of q(x) f(x) dx` for a smooth
    /// weight `f`, refined until the Richardson estimate meets `target`.
    ///
    /// The quadrature distributes over cells and combination components,
    /// so the (measure-zero) values at cell boundaries never enter and
    /// the functional stays exactly linear in `q`.
    pub fn integrate_against(&self, f: impl Fn(f64) -> f64, target: f64) -> f64 {
        let base = self.kind.integrate_against(&f, target / self.scale.abs().max(1.0));
        let constant_part = if self.offset == 0.0 {
            0.0
        } else {
            self.offset
                * quad::simpson_adaptive(&f, &[0.0, 1.0], target / self.offset.abs())
                    .expect("valid interval")
                    .value
        };
        self.scale * base + constant_part
    }

    /// Even Fourier coefficient `a_n = integral of q(x) cos(2 pi n x)`.
    pub fn fourier_cos_coeff(&self, n: u32) -> f64 {
        assert!(n >= 1, "Fourier index must be >= 1");
        let w = TAU * n as f64;
        self.integrate_against(|x| (w * x).cos(), 1e-12)
    }

    /// Odd Fourier coefficient `b_n = integral of q(x) sin(2 pi n x)`.
    pub fn fourier_sin_coeff(&self, n: u32) -> f64 {
        assert!(n >= 1, "Fourier index must be >= 1");
        let w = TAU * n as f64;
        self.integrate_against(|x| (w * x).sin(), 1e-12)
    }

    /// Splits the potential into even and odd parts about `x = 1/2`.
    /// The parts reconstruct the potential pointwise.
    pub fn even_odd_split(&self) -> EvenOddParts {
        let (ke, ko) = self.kind.even_odd();
        let even = Potential {
            kind: ke,
            scale: self.scale,
            offset: self.offset,
        };
        let odd = Potential {
            kind: ko,
            scale: self.scale,
            offset: 0.0,
        };
        EvenOddParts { even, odd }
    }

    /// L1 norm of `q - c`, exact for piecewise-constant and sampled
    /// representations, adaptive quadrature otherwise.
    pub fn l1_distance_to_constant(&self, c: f64) -> f64 {
        match &self.kind {
            Kind::PiecewiseConstant {
                breakpoints,
                values,
            } => {
                let mut total = 0.0;
                for (i, v) in values.iter().enumerate() {
                    let width = breakpoints[i + 1] - breakpoints[i];
                    total += (self.scale * v + self.offset - c).abs() * width;
                }
                total
            }
            Kind::Sampled { values } => {
                let m = values.len();
                let h = 1.0 / (m - 1) as f64;
                let mut total = 0.0;
                for i in 0..m - 1 {
                    let f0 = self.scale * values[i] + self.offset - c;
                    let f1 = self.scale * values[i + 1] + self.offset - c;
                    total += segment_abs_integral(f0, f1, h);
                }
                total
            }
            Kind::Analytic(_) | Kind::Mix(_) => {
                // piece-aligned quadrature with panel endpoints read from
                // their own side of any cell boundary
                let pieces = self.quad_pieces();
                let mut total = 0.0;
                for w in pieces.windows(2) {
                    let (lo, hi) = (w[0], w[1]);
                    let f = |x: f64| {
                        let v = if x == lo {
                            self.eval_limit(x, false)
                        } else if x == hi {
                            self.eval_limit(x, true)
                        } else {
                            self.eval_unchecked(x)
                        };
                        (v - c).abs()
                    };
                    total += quad::simpson_adaptive(f, &[lo, hi], 1e-10 / pieces.len() as f64)
                        .expect("valid piece")
                        .value;
                }
                total
            }
        }
    }

    /// Sup-norm distance to a constant where it is exact (piecewise
    /// representations); `None` for interpolated/analytic kinds.
    pub fn linf_distance_to_constant(&self, c: f64) -> Option<f64> {
        match &self.kind {
            Kind::PiecewiseConstant { values, .. } => Some(
                values
                    .iter()
                    .map(|v| (self.scale * v + self.offset - c).abs())
                    .fold(0.0, f64::max),
            ),
            _ => None,
        }
    }

    /// Short human-readable description used in reports.
    pub fn describe(&self) -> String {
        let base = describe_kind(&self.kind);
        if self.scale == 1.0 && self.offset == 0.0 {
            base
        } else {
            format!("{}*{} + {}", self.scale, base, self.offset)
        }
    }
}

fn describe_kind(kind: &Kind) -> String {
    match kind {
        Kind::PiecewiseConstant { values, .. } => format!("piecewise[{} cells]", values.len()),
        Kind::Sampled { values } => format!("sampled[{} pts]", values.len()),
        Kind::Analytic(Waveform::Zero) => "zero".to_string(),
        Kind::Analytic(Waveform::Cos(k)) => format!("cos(2pi*{k}*x)"),
        Kind::Analytic(Waveform::Sin(k)) => format!("sin(2pi*{k}*x)"),
        Kind::Mix(parts) => {
            let inner: Vec<String> = parts
                .iter()
                .map(|(c, k)| format!("{c}*{}", describe_kind(k)))
                .collect();
            format!("mix[{}]", inner.join(" + "))
        }
    }
}

/// Flattens a scaled kind into combination components (nested
/// combinations distribute their coefficients).
fn flatten_mix(scale: f64, kind: &Kind) -> Vec<(f64, Kind)> {
    match kind {
        Kind::Mix(parts) => parts
            .iter()
            .map(|(c, k)| (scale * c, k.clone()))
            .collect(),
        other => vec![(scale, other.clone())],
    }
}

/// Exact integral of |linear segment| over width `h`, splitting at the
/// sign change when the endpoint values straddle zero.
fn segment_abs_integral(f0: f64, f1: f64, h: f64) -> f64 {
    if f0 == 0.0 && f1 == 0.0 {
        0.0
    } else if f0 * f1 >= 0.0 {
        0.5 * (f0.abs() + f1.abs()) * h
    } else {
        let t = f0 / (f0 - f1); // crossing point in [0, 1]
        0.5 * h * (f0.abs() * t + f1.abs() * (1.0 - t))
    }
}
