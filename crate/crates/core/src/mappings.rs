//! Self-maps of a box domain and grid-based checks of the mapping classes
//! used by the convergence theory.
//!
//! Property checks sample a uniform grid of the domain and test the defining
//! inequality on every ordered pair of grid points, with slack
//! [`TOLERANCE`](crate::TOLERANCE) on both sides. A failing check returns the
//! first violating pair in lexicographic grid order, so witnesses are
//! reproducible.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicUsize, Ordering};

use crate::numerics::{distance_unchecked, BoxDomain, Point};
use crate::{Error, Result, TOLERANCE};

/// Catalog identifiers, in the order they are listed to users.
pub const CATALOG_IDS: [&str; 5] = ["cbrt", "half", "cosine", "identity", "double"];

/// Fixed point of `x ↦ (x+2)^{1/3}`, published to 16 significant digits.
pub const CBRT_FIXED_POINT: f64 = 1.521379706804568;

/// Double nearest the exact fixed point 1.52137970680456756960...;
/// `CBRT_FIXED_POINT` itself lies 2 ulp above it.
pub const CBRT_FIXED_POINT_F64: f64 = 1.5213797068045676;

/// Default grid density for property checks in one dimension.
pub const DEFAULT_GRID: usize = 10_000;

type EvalFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// A deterministic self-map `T` of a box domain.
#[derive(Clone)]
pub struct Mapping {
    id: String,
    domain: BoxDomain,
    eval: Arc<EvalFn>,
    theta_hint: Option<f64>,
    fixed_point_hint: Option<Point>,
}

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mapping")
            .field("id", &self.id)
            .field("domain", &self.domain)
            .field("theta_hint", &self.theta_hint)
            .field("fixed_point_hint", &self.fixed_point_hint)
            .finish_non_exhaustive()
    }
}

impl Mapping {
    /// Wraps a function of the coordinates. The function must return a vector
    /// of the same dimension as the domain.
    pub fn new<F>(id: impl Into<String>, domain: BoxDomain, eval: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Mapping { id: id.into(), domain, eval: Arc::new(eval), theta_hint: None, fixed_point_hint: None }
    }

    /// Convenience constructor for maps of an interval.
    pub fn scalar<F>(id: impl Into<String>, lo: f64, hi: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Ok(Mapping::new(id, BoxDomain::interval(lo, hi)?, move |x| alloc::vec![f(x[0])]))
    }

    /// Attaches a known contraction modulus, which must lie in (0,1).
    pub fn with_theta(mut self, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::OutOfRange { name: "theta", value: theta });
        }
        self.theta_hint = Some(theta);
        Ok(self)
    }

    /// Attaches a known fixed point.
    pub fn with_fixed_point(mut self, p: Point) -> Result<Self> {
        if p.dim() != self.domain.dim() {
            return Err(Error::DimensionMismatch { expected: self.domain.dim(), found: p.dim() });
        }
        self.fixed_point_hint = Some(p);
        Ok(self)
    }

    /// Catalog or user-supplied name.
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Domain `C`.
    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    /// Known contraction modulus, if any.
    pub fn theta_hint(&self) -> Option<f64> {
        self.theta_hint
    }

    /// Known fixed point, if any.
    pub fn fixed_point_hint(&self) -> Option<&Point> {
        self.fixed_point_hint.as_ref()
    }

    /// Evaluates `T(x)`.
    pub fn eval(&self, x: &Point) -> Result<Point> {
        if x.dim() != self.domain.dim() {
            return Err(Error::DimensionMismatch { expected: self.domain.dim(), found: x.dim() });
        }
        let out = (self.eval)(x.coords());
        if out.len() != x.dim() {
            return Err(Error::DimensionMismatch { expected: x.dim(), found: out.len() });
        }
        Point::from_eval(out)
    }

    /// Residual `‖T(x) − x‖`.
    pub fn residual(&self, x: &Point) -> Result<f64> {
        Ok(distance_unchecked(&self.eval(x)?, x))
    }

    /// Returns a copy whose evaluations increment the returned counter.
    pub fn instrumented(&self) -> (Mapping, Arc<AtomicUsize>) {
        let counter = Arc::new(AtomicUsize::new(0));
        let inner = Arc::clone(&self.eval);
        let c = Arc::clone(&counter);
        let mut m = self.clone();
        m.eval = Arc::new(move |x: &[f64]| {
            c.fetch_add(1, Ordering::Relaxed);
            inner(x)
        });
        (m, counter)
    }

    /// Approximate operator `T̃(x) = clamp(T(x) + shift)`, where the shift is
    /// added to every coordinate and the clamp is onto the domain.
    ///
    /// For a self-map the clamp can only move `T̃x` toward `Tx`, so
    /// `‖Tx − T̃x‖ ≤ |shift|·√d` holds everywhere.
    pub fn shifted(&self, shift: f64) -> Mapping {
        let inner = Arc::clone(&self.eval);
        let domain = self.domain.clone();
        let (lo, hi) = (domain.lower().coords().to_vec(), domain.upper().coords().to_vec());
        let mut id = self.id.clone();
        id.push_str("+shift");
        Mapping {
            id,
            domain,
            eval: Arc::new(move |x: &[f64]| {
                inner(x).into_iter().enumerate().map(|(i, v)| (v + shift).clamp(lo[i], hi[i])).collect()
            }),
            theta_hint: None,
            fixed_point_hint: None,
        }
    }

    /// First grid point whose image leaves the domain, if any.
    pub fn find_domain_escape(&self, grid_size: usize) -> Result<Option<Point>> {
        for x in self.domain.grid(grid_size) {
            if !self.domain.contains_with_slack(&self.eval(&x)?, TOLERANCE) {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

/// `T(x) = (x+2)^{1/3}` on `[0,4]`.
pub fn builtin_cbrt_map() -> Mapping {
    let theta = libm::cbrt(0.25) / 3.0;
    Mapping::scalar("cbrt", 0.0, 4.0, |x| libm::cbrt(x + 2.0))
        .and_then(|m| m.with_theta(theta))
        .and_then(|m| m.with_fixed_point(Point::scalar(CBRT_FIXED_POINT_F64)))
        .expect("cbrt catalog entry is well formed")
}

/// Looks up a catalog mapping by id.
///
/// | id | map | domain | θ | p |
/// |----|-----|--------|---|---|
/// | `cbrt` | (x+2)^{1/3} | [0,4] | 2^{-2/3}/3 | 1.5213797068045676 |
/// | `half` | x/2 | [0,1] | 1/2 | 0 |
/// | `cosine` | cos x | [0,1] | sin 1 | 0.739085133215161 |
/// | `identity` | x | [0,1] | – | – |
/// | `double` | 2x | [0,1] | – | 0 (not a self-map) |
pub fn catalog(id: &str) -> Result<Mapping> {
    let m = match id {
        "cbrt" => return Ok(builtin_cbrt_map()),
        "half" => {
            Mapping::scalar("half", 0.0, 1.0, |x| x / 2.0)?.with_theta(0.5)?.with_fixed_point(Point::scalar(0.0))?
        }
        "cosine" => Mapping::scalar("cosine", 0.0, 1.0, libm::cos)?
            .with_theta(libm::sin(1.0))?
            .with_fixed_point(Point::scalar(0.739085133215161))?,
        "identity" => Mapping::scalar("identity", 0.0, 1.0, |x| x)?,
        "double" => Mapping::scalar("double", 0.0, 1.0, |x| 2.0 * x)?.with_fixed_point(Point::scalar(0.0))?,
        other => return Err(Error::UnknownId { kind: "mapping", id: other.to_string() }),
    };
    Ok(m)
}

/// Mapping classes that can be checked on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Property {
    /// `‖Tx − Ty‖ ≤ θ‖x − y‖` for some θ < 1.
    Contraction,
    /// `‖Tx − Ty‖ ≤ ‖x − y‖`.
    Nonexpansive,
    /// `‖Tx − p‖ ≤ ‖x − p‖` at a fixed point p.
    QuasiNonexpansive,
    /// `½‖x − Tx‖ ≤ ‖x − y‖ ⟹ ‖Tx − Ty‖ ≤ ‖x − y‖`.
    ConditionC,
    /// `‖x − Ty‖ ≤ 3‖Tx − x‖ + ‖x − y‖`.
    Prop1Iii,
}

/// Outcome of a property check.
#[derive(Debug, Clone, PartialEq, Eq, Copy)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    /// No violation found on the grid.
    Pass,
    /// A witness violates the inequality.
    Fail,
}

/// Result of a grid check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PropertyReport {
    /// Which class was checked.
    pub property: Property,
    /// Pass or fail.
    pub verdict: Verdict,
    /// First violating `(x, y)` pair; for quasi-nonexpansiveness `y` is `p`.
    pub witness: Option<(Point, Point)>,
    /// Number of pairs (or points) examined.
    pub samples_checked: usize,
    /// Largest difference quotient seen, when the check computes it.
    pub estimated_modulus: Option<f64>,
}

impl PropertyReport {
    fn new(property: Property, witness: Option<(Point, Point)>, samples: usize, modulus: Option<f64>) -> Self {
        let verdict = if witness.is_some() { Verdict::Fail } else { Verdict::Pass };
        PropertyReport { property, verdict, witness, samples_checked: samples, estimated_modulus: modulus }
    }

    /// True on [`Verdict::Pass`].
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Re-evaluates the defining inequality on the witness. Returns `false`
    /// for passing reports.
    pub fn witness_reproduces(&self, m: &Mapping) -> Result<bool> {
        let Some((x, y)) = &self.witness else { return Ok(false) };
        let (tx, ty) = (m.eval(x)?, m.eval(y)?);
        let dxy = distance_unchecked(x, y);
        Ok(match self.property {
            Property::Contraction => distance_unchecked(&tx, &ty) >= dxy,
            Property::Nonexpansive => distance_unchecked(&tx, &ty) > dxy + TOLERANCE,
            Property::QuasiNonexpansive => distance_unchecked(&tx, y) > dxy + TOLERANCE,
            Property::ConditionC => {
                0.5 * distance_unchecked(x, &tx) <= dxy + TOLERANCE && distance_unchecked(&tx, &ty) > dxy + TOLERANCE
            }
            Property::Prop1Iii => distance_unchecked(x, &ty) > 3.0 * distance_unchecked(&tx, x) + dxy + TOLERANCE,
        })
    }
}

struct Sampled {
    points: Vec<Point>,
    images: Vec<Point>,
}

fn sample(m: &Mapping, grid_size: usize) -> Result<Sampled> {
    if grid_size < 2 {
        return Err(Error::OutOfRange { name: "grid_size", value: grid_size as f64 });
    }
    let points = m.domain().grid(grid_size);
    let images = points.iter().map(|x| m.eval(x)).collect::<Result<Vec<_>>>()?;
    Ok(Sampled { points, images })
}

/// Scans ordered pairs `(i, j)` in lexicographic order and returns the first
/// one for which `violates` holds, plus the number of pairs visited.
fn first_violation(
    s: &Sampled,
    include_diagonal: bool,
    mut violates: impl FnMut(usize, usize) -> bool,
) -> (Option<(Point, Point)>, usize) {
    let n = s.points.len();
    let mut checked = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j && !include_diagonal {
                continue;
            }
            checked += 1;
            if violates(i, j) {
                return (Some((s.points[i].clone(), s.points[j].clone())), checked);
            }
        }
    }
    (None, checked)
}

/// Largest `‖Tx − Ty‖ / ‖x − y‖` over distinct grid pairs, with the pair
/// attaining it.
fn max_quotient(s: &Sampled) -> (f64, usize, usize) {
    let n = s.points.len();
    let (mut best, mut bi, mut bj) = (0.0f64, 0, 0);
    for i in 0..n {
        for j in i + 1..n {
            let dx = distance_unchecked(&s.points[i], &s.points[j]);
            if dx == 0.0 {
                continue;
            }
            let q = distance_unchecked(&s.images[i], &s.images[j]) / dx;
            if q > best {
                (best, bi, bj) = (q, i, j);
            }
        }
    }
    (best, bi, bj)
}

/// Grid lower bound on the Lipschitz constant of `m`.
pub fn estimate_contraction_modulus(m: &Mapping, grid_size: usize) -> Result<f64> {
    if m.domain().is_degenerate() {
        return Err(Error::DegenerateDomain);
    }
    let s = sample(m, grid_size)?;
    Ok(max_quotient(&s).0)
}

/// Passes when the estimated modulus is below one; otherwise the witness is
/// the pair attaining the maximal quotient.
pub fn check_contraction(m: &Mapping, grid_size: usize) -> Result<PropertyReport> {
    if m.domain().is_degenerate() {
        return Err(Error::DegenerateDomain);
    }
    let s = sample(m, grid_size)?;
    let (q, i, j) = max_quotient(&s);
    let n = s.points.len();
    let witness = (q >= 1.0).then(|| (s.points[i].clone(), s.points[j].clone()));
    Ok(PropertyReport::new(Property::Contraction, witness, n * (n - 1) / 2, Some(q)))
}

/// Checks `‖Tx − Ty‖ ≤ ‖x − y‖` on all ordered grid pairs.
pub fn check_nonexpansive(m: &Mapping, grid_size: usize) -> Result<PropertyReport> {
    let s = sample(m, grid_size)?;
    let (witness, checked) = first_violation(&s, false, |i, j| {
        distance_unchecked(&s.images[i], &s.images[j]) > distance_unchecked(&s.points[i], &s.points[j]) + TOLERANCE
    });
    let modulus = if m.domain().is_degenerate() { None } else { Some(max_quotient(&s).0) };
    Ok(PropertyReport::new(Property::Nonexpansive, witness, checked, modulus))
}

/// Checks Suzuki's condition (C) on all ordered grid pairs.
pub fn check_condition_c(m: &Mapping, grid_size: usize) -> Result<PropertyReport> {
    let s = sample(m, grid_size)?;
    let half_res: Vec<f64> = s.points.iter().zip(&s.images).map(|(x, tx)| 0.5 * distance_unchecked(x, tx)).collect();
    let (witness, checked) = first_violation(&s, false, |i, j| {
        let dxy = distance_unchecked(&s.points[i], &s.points[j]);
        half_res[i] <= dxy + TOLERANCE && distance_unchecked(&s.images[i], &s.images[j]) > dxy + TOLERANCE
    });
    Ok(PropertyReport::new(Property::ConditionC, witness, checked, None))
}

/// Checks `‖Tx − p‖ ≤ ‖x − p‖` for every grid point. `p` must be a fixed
/// point within the tolerance.
pub fn check_quasi_nonexpansive(m: &Mapping, p: &Point, grid_size: usize) -> Result<PropertyReport> {
    let residual = m.residual(p)?;
    if residual > TOLERANCE {
        return Err(Error::NotFixedPoint { residual });
    }
    let s = sample(m, grid_size)?;
    let mut witness = None;
    let mut checked = 0;
    for (x, tx) in s.points.iter().zip(&s.images) {
        checked += 1;
        if distance_unchecked(tx, p) > distance_unchecked(x, p) + TOLERANCE {
            witness = Some((x.clone(), p.clone()));
            break;
        }
    }
    Ok(PropertyReport::new(Property::QuasiNonexpansive, witness, checked, None))
}

/// Checks `‖x − Ty‖ ≤ 3‖Tx − x‖ + ‖x − y‖` on all ordered pairs, diagonal included.
pub fn check_prop1_iii(m: &Mapping, grid_size: usize) -> Result<PropertyReport> {
    let s = sample(m, grid_size)?;
    let res: Vec<f64> = s.points.iter().zip(&s.images).map(|(x, tx)| distance_unchecked(x, tx)).collect();
    let (witness, checked) = first_violation(&s, true, |i, j| {
        distance_unchecked(&s.points[i], &s.images[j])
            > 3.0 * res[i] + distance_unchecked(&s.points[i], &s.points[j]) + TOLERANCE
    });
    Ok(PropertyReport::new(Property::Prop1Iii, witness, checked, None))
}

const PICARD_CAP: usize = 100_000;

/// Independent reference fixed point: plain Picard iteration from the domain
/// center until `‖T(x) − x‖ ≤ tol`, falling back to bisection on `T(x) − x`
/// for scalar maps.
pub fn fixed_point_reference(m: &Mapping, tol: f64) -> Result<Point> {
    if !(tol >= 0.0) {
        return Err(Error::OutOfRange { name: "tol", value: tol });
    }
    let mut x = m.domain().midpoint();
    let mut residual = f64::INFINITY;
    for _ in 0..PICARD_CAP {
        let tx = m.eval(&x)?;
        residual = distance_unchecked(&tx, &x);
        if residual <= tol {
            return Ok(x);
        }
        x = tx;
    }
    if m.domain().dim() == 1 {
        if let Some(p) = bisect_scalar(m, tol)? {
            return Ok(p);
        }
    }
    Err(Error::NoConvergence { iterations: PICARD_CAP, residual })
}

fn bisect_scalar(m: &Mapping, tol: f64) -> Result<Option<Point>> {
    let g = |x: f64| -> Result<f64> { Ok(m.eval(&Point::scalar(x))?[0] - x) };
    let (mut lo, mut hi) = (m.domain().lower()[0], m.domain().upper()[0]);
    let (mut glo, ghi) = (g(lo)?, g(hi)?);
    if glo == 0.0 {
        return Ok(Some(Point::scalar(lo)));
    }
    if ghi == 0.0 {
        return Ok(Some(Point::scalar(hi)));
    }
    if glo.signum() == ghi.signum() {
        return Ok(None);
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid)?;
        if gm == 0.0 {
            return Ok(Some(Point::scalar(mid)));
        }
        if gm.signum() == glo.signum() {
            (lo, glo) = (mid, gm);
        } else {
            hi = mid;
        }
    }
    let best = if libm::fabs(g(lo)?) <= libm::fabs(g(hi)?) { lo } else { hi };
    Ok((libm::fabs(g(best)?) <= tol).then(|| Point::scalar(best)))
}
