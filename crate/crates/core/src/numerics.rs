//! Points, box domains, convex combinations and parameter schedules.
//!
//! The ambient space is R^d with the Euclidean norm. Everything is binary64.

use alloc::vec::Vec;
use core::ops::Deref;

use crate::{Error, Result};

/// A point of R^d with finite coordinates, d ≥ 1.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Point(Vec<f64>);

impl Point {
    /// Builds a point, rejecting empty or non-finite coordinate lists.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { context: "point" });
        }
        Ok(Point(coords))
    }

    /// One-dimensional point. Panics on a non-finite value.
    pub fn scalar(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite scalar point");
        Point(alloc::vec![x])
    }

    /// Wraps coordinates produced by a mapping, reporting non-finite output.
    pub(crate) fn from_eval(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { context: "mapping output" });
        }
        Ok(Point(coords))
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinates as a slice.
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        norm2(&self.0)
    }

    pub(crate) fn map_coords(&self, f: impl Fn(usize, f64) -> f64) -> Point {
        Point(self.0.iter().enumerate().map(|(i, &c)| f(i, c)).collect())
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

fn norm2(v: &[f64]) -> f64 {
    match v {
        [x] => libm::fabs(*x),
        _ => libm::sqrt(v.iter().map(|c| c * c).sum::<f64>()),
    }
}

fn check_dims(x: &Point, y: &Point) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    Ok(())
}

/// Returns `(1 − t)·x + t·y`, evaluated literally per coordinate.
pub fn convex_combine(t: f64, x: &Point, y: &Point) -> Result<Point> {
    check_dims(x, y)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange { name: "t", value: t });
    }
    Ok(combine_unchecked(t, x, y))
}

pub(crate) fn combine_unchecked(t: f64, x: &Point, y: &Point) -> Point {
    Point(x.0.iter().zip(&y.0).map(|(a, b)| (1.0 - t) * a + t * b).collect())
}

/// Euclidean distance `‖x − y‖`.
pub fn distance(x: &Point, y: &Point) -> Result<f64> {
    check_dims(x, y)?;
    Ok(distance_unchecked(x, y))
}

pub(crate) fn distance_unchecked(x: &Point, y: &Point) -> f64 {
    if x.dim() == 1 {
        return libm::fabs(x.0[0] - y.0[0]);
    }
    libm::sqrt(x.0.iter().zip(&y.0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
}

/// Closed axis-aligned box `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoxDomain {
    lower: Point,
    upper: Point,
}

impl BoxDomain {
    /// Builds a box; bounds must agree in dimension and satisfy `lower ≤ upper`.
    pub fn new(lower: Point, upper: Point) -> Result<Self> {
        check_dims(&lower, &upper)?;
        if let Some(axis) = lower.iter().zip(upper.iter()).position(|(l, u)| l > u) {
            return Err(Error::InvalidDomain { axis });
        }
        Ok(BoxDomain { lower, upper })
    }

    /// The interval `[lo, hi]` as a one-dimensional box.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        BoxDomain::new(Point::new(alloc::vec![lo])?, Point::new(alloc::vec![hi])?)
    }

    /// Lower corner.
    pub fn lower(&self) -> &Point {
        &self.lower
    }

    /// Upper corner.
    pub fn upper(&self) -> &Point {
        &self.upper
    }

    /// Dimension of the ambient space.
    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    /// True when every axis has zero width.
    pub fn is_degenerate(&self) -> bool {
        self.lower == self.upper
    }

    /// Center of the box.
    pub fn midpoint(&self) -> Point {
        self.lower.map_coords(|i, l| 0.5 * l + 0.5 * self.upper.0[i])
    }

    /// Membership test with an absolute slack per coordinate.
    pub fn contains_with_slack(&self, x: &Point, slack: f64) -> bool {
        x.dim() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(self.upper.iter()))
                .all(|(c, (l, u))| *c >= l - slack && *c <= u + slack)
    }

    /// Exact membership test.
    pub fn contains(&self, x: &Point) -> bool {
        self.contains_with_slack(x, 0.0)
    }

    /// Nearest point of the box (coordinate-wise clamp).
    pub fn clamp(&self, x: &Point) -> Point {
        x.map_coords(|i, c| c.clamp(self.lower.0[i], self.upper.0[i]))
    }

    /// Uniform tensor grid with roughly `grid_size` points in total.
    ///
    /// In one dimension this is exactly `grid_size` equally spaced points
    /// including both endpoints. In d dimensions each axis gets
    /// `ceil(grid_size^(1/d))` points. Degenerate axes contribute one point.
    pub fn grid(&self, grid_size: usize) -> Vec<Point> {
        let d = self.dim();
        let per_axis = if d == 1 {
            grid_size.max(1)
        } else {
            let mut k = libm::ceil(libm::pow(grid_size as f64, 1.0 / d as f64)) as usize;
            while k > 1 && (k - 1).pow(d as u32) >= grid_size {
                k -= 1;
            }
            k.max(1)
        };
        let axes: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let (lo, hi) = (self.lower.0[i], self.upper.0[i]);
                if lo == hi || per_axis == 1 {
                    alloc::vec![lo]
                } else {
                    let steps = (per_axis - 1) as f64;
                    (0..per_axis)
                        .map(|k| if k == per_axis - 1 { hi } else { lo + (hi - lo) * (k as f64 / steps) })
                        .collect()
                }
            })
            .collect();
        let total: usize = axes.iter().map(Vec::len).product();
        let mut out = Vec::with_capacity(total);
        let mut idx = alloc::vec![0usize; d];
        for _ in 0..total {
            out.push(Point(idx.iter().enumerate().map(|(i, &k)| axes[i][k]).collect()));
            for i in (0..d).rev() {
                idx[i] += 1;
                if idx[i] < axes[i].len() {
                    break;
                }
                idx[i] = 0;
            }
        }
        out
    }
}

/// Closed family of formula schedules.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ScheduleFormula {
    /// `α_n = β_n = 1/(n+1)`; `Σ α_nβ_n` converges.
    Harmonic,
    /// `α_n = β_n = 1/√(n+1)`; `Σ α_nβ_n` diverges.
    InverseSqrt,
    /// `α_n = α`, `β_n = 1/(n+1)`; diverges for `α > 0`.
    ConstantAlphaHarmonicBeta {
        /// Constant α.
        alpha: f64,
    },
}

/// How a schedule produces its pairs.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ScheduleKind {
    /// Same pair at every step.
    Constant {
        /// α for every n.
        alpha: f64,
        /// β for every n.
        beta: f64,
    },
    /// Explicit finite list of `(α_n, β_n)`.
    Tabulated(Vec<(f64, f64)>),
    /// Closed-form sequence.
    Formula(ScheduleFormula),
}

/// The sequences `{α_n}`, `{β_n}` ⊂ [0,1] driving every scheme.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ParamSchedule {
    kind: ScheduleKind,
    divergent_sum_certified: bool,
}

fn unit(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value })
    }
}

impl ParamSchedule {
    /// Constant schedule. `Σ α_nβ_n = ∞` is certified when `αβ > 0`.
    pub fn constant(alpha: f64, beta: f64) -> Result<Self> {
        let (alpha, beta) = (unit("alpha", alpha)?, unit("beta", beta)?);
        Ok(ParamSchedule { kind: ScheduleKind::Constant { alpha, beta }, divergent_sum_certified: alpha * beta > 0.0 })
    }

    /// Finite table of pairs. Never certified divergent.
    pub fn tabulated(pairs: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &pairs {
            unit("alpha", a)?;
            unit("beta", b)?;
        }
        Ok(ParamSchedule { kind: ScheduleKind::Tabulated(pairs), divergent_sum_certified: false })
    }

    /// Formula schedule.
    pub fn formula(formula: ScheduleFormula) -> Result<Self> {
        let certified = match formula {
            ScheduleFormula::Harmonic => false,
            ScheduleFormula::InverseSqrt => true,
            ScheduleFormula::ConstantAlphaHarmonicBeta { alpha } => unit("alpha", alpha)? > 0.0,
        };
        Ok(ParamSchedule { kind: ScheduleKind::Formula(formula), divergent_sum_certified: certified })
    }

    /// Underlying description.
    pub fn kind(&self) -> &ScheduleKind {
        &self.kind
    }

    /// Whether `Σ α_nβ_n = ∞` is known to hold.
    pub fn divergent_sum_certified(&self) -> bool {
        self.divergent_sum_certified
    }

    /// Shorthand for [`schedule_at`].
    pub fn at(&self, n: usize) -> Result<(f64, f64)> {
        schedule_at(self, n)
    }
}

/// Returns `(α_n, β_n)`.
pub fn schedule_at(s: &ParamSchedule, n: usize) -> Result<(f64, f64)> {
    match &s.kind {
        ScheduleKind::Constant { alpha, beta } => Ok((*alpha, *beta)),
        ScheduleKind::Tabulated(pairs) => {
            pairs.get(n).copied().ok_or(Error::ScheduleExhausted { index: n, len: pairs.len() })
        }
        ScheduleKind::Formula(f) => {
            let m = (n + 1) as f64;
            Ok(match *f {
                ScheduleFormula::Harmonic => (1.0 / m, 1.0 / m),
                ScheduleFormula::InverseSqrt => {
                    let v = 1.0 / libm::sqrt(m);
                    (v, v)
                }
                ScheduleFormula::ConstantAlphaHarmonicBeta { alpha } => (alpha, 1.0 / m),
            })
        }
    }
}
