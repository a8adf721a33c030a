//! One-step maps and orbit runners for the iteration schemes.
//!
//! Every step evaluates its formula in the displayed order, with convex
//! combinations computed literally as `(1 − t)·x + t·y`, so that different
//! implementations agree to the last bit on the reference table.
//!
//! | scheme | step | T evaluations |
//! |--------|------|---------------|
//! | `k` | z = (1−β)x + βTx; y = T((1−α)Tx + αTz); x' = Ty | 4 |
//! | `picard_s` | w = (1−β)u + βTu; v = (1−α)Tu + αTw; u' = Tv | 3 |
//! | `thakur_new` | w = (1−β)u + βTu; v = T((1−α)u + αw); u' = Tv | 3 |
//! | `vatan_two_step` | v = T((1−β)u + βTu); u' = T((1−α)v + αTv) | 4 |
//! | `picard` | x' = Tx | 1 |
//! | `mann` | x' = (1−α)x + αTx | 1 |
//! | `ishikawa` | y = (1−β)x + βTx; x' = (1−α)x + αTy | 2 |
//! | `noor` | z = (1−γ)x + γTx; y = (1−β)x + βTz; x' = (1−α)x + αTy | 3 |

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::mappings::Mapping;
use crate::numerics::{combine_unchecked, distance_unchecked, schedule_at, ParamSchedule, Point};
use crate::{Error, Result, TOLERANCE};

/// Scheme identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SchemeId {
    /// Three-stage K iteration.
    K,
    /// Picard-S.
    PicardS,
    /// Thakur New.
    ThakurNew,
    /// Vatan two-step.
    VatanTwoStep,
    /// Plain successive approximation.
    Picard,
    /// Mann.
    Mann,
    /// Ishikawa.
    Ishikawa,
    /// Noor.
    Noor,
}

impl SchemeId {
    /// All schemes, in catalog order.
    pub const ALL: [SchemeId; 8] = [
        SchemeId::K,
        SchemeId::PicardS,
        SchemeId::ThakurNew,
        SchemeId::VatanTwoStep,
        SchemeId::Picard,
        SchemeId::Mann,
        SchemeId::Ishikawa,
        SchemeId::Noor,
    ];

    /// Serialized name.
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::K => "k",
            SchemeId::PicardS => "picard_s",
            SchemeId::ThakurNew => "thakur_new",
            SchemeId::VatanTwoStep => "vatan_two_step",
            SchemeId::Picard => "picard",
            SchemeId::Mann => "mann",
            SchemeId::Ishikawa => "ishikawa",
            SchemeId::Noor => "noor",
        }
    }

    /// Number of `T` evaluations one step performs.
    pub fn evaluations_per_step(self) -> usize {
        match self {
            SchemeId::K | SchemeId::VatanTwoStep => 4,
            SchemeId::PicardS | SchemeId::ThakurNew | SchemeId::Noor => 3,
            SchemeId::Ishikawa => 2,
            SchemeId::Picard | SchemeId::Mann => 1,
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownId { kind: "scheme", id: s.to_string() })
    }
}

/// Audit record of a single step.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StepTrace {
    /// Step index n.
    pub n: usize,
    /// Incoming iterate.
    pub input: Point,
    /// Named intermediates (`z`, `y`, `w`, `v`, ...) in evaluation order.
    pub intermediates: Vec<(&'static str, Point)>,
    /// Next iterate.
    pub output: Point,
}

struct Stepper<'a> {
    map: &'a Mapping,
    n: usize,
}

impl Stepper<'_> {
    fn t(&self, x: &Point) -> Result<Point> {
        self.map.eval(x)
    }

    fn inside(&self, x: &Point, what: &'static str) -> Result<()> {
        if self.map.domain().contains_with_slack(x, TOLERANCE) {
            Ok(())
        } else {
            Err(Error::OutsideDomain { context: what, step: self.n })
        }
    }

    fn trace(&self, input: &Point, intermediates: Vec<(&'static str, Point)>, output: Point) -> Result<StepTrace> {
        for (name, p) in &intermediates {
            self.inside(p, name)?;
        }
        self.inside(&output, "iterate")?;
        Ok(StepTrace { n: self.n, input: input.clone(), intermediates, output })
    }
}

fn check_step_args(m: &Mapping, x: &Point, params: &[(&'static str, f64)]) -> Result<()> {
    if x.dim() != m.domain().dim() {
        return Err(Error::DimensionMismatch { expected: m.domain().dim(), found: x.dim() });
    }
    for &(name, v) in params {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange { name, value: v });
        }
    }
    if !m.domain().contains_with_slack(x, TOLERANCE) {
        return Err(Error::OutsideDomain { context: "input", step: 0 });
    }
    Ok(())
}

fn step_k_at(m: &Mapping, n: usize, x: &Point, alpha: f64, beta: f64) -> Result<StepTrace> {
    let s = Stepper { map: m, n };
    let tx = s.t(x)?;
    let z = combine_unchecked(beta, x, &tx);
    let tz = s.t(&z)?;
    let inner = combine_unchecked(alpha, &tx, &tz);
    let y = s.t(&inner)?;
    let out = s.t(&y)?;
    s.trace(x, alloc::vec![("z", z), ("y", y)], out)
}

fn step_picard_s_at(m: &Mapping, n: usize, u: &Point, alpha: f64, beta: f64) -> Result<StepTrace> {
    let s = Stepper { map: m, n };
    let tu = s.t(u)?;
    let w = combine_unchecked(beta, u, &tu);
    let tw = s.t(&w)?;
    let v = combine_unchecked(alpha, &tu, &tw);
    let out = s.t(&v)?;
    s.trace(u, alloc::vec![("w", w), ("v", v)], out)
}

fn step_thakur_new_at(m: &Mapping, n: usize, u: &Point, alpha: f64, beta: f64) -> Result<StepTrace> {
    let s = Stepper { map: m, n };
    let tu = s.t(u)?;
    let w = combine_unchecked(beta, u, &tu);
    let inner = combine_unchecked(alpha, u, &w);
    let v = s.t(&inner)?;
    let out = s.t(&v)?;
    s.trace(u, alloc::vec![("w", w), ("v", v)], out)
}

fn step_vatan_two_step_at(m: &Mapping, n: usize, u: &Point, alpha: f64, beta: f64) -> Result<StepTrace> {
    let s = Stepper { map: m, n };
    let tu = s.t(u)?;
    let v = s.t(&combine_unchecked(beta, u, &tu))?;
    let tv = s.t(&v)?;
    let out = s.t(&combine_unchecked(alpha, &v, &tv))?;
    s.trace(u, alloc::vec![("v", v)], out)
}

fn step_classic_at(
    id: SchemeId,
    m: &Mapping,
    n: usize,
    x: &Point,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<StepTrace> {
    let s = Stepper { map: m, n };
    match id {
        SchemeId::Picard => {
            let out = s.t(x)?;
            s.trace(x, Vec::new(), out)
        }
        SchemeId::Mann => {
            let tx = s.t(x)?;
            s.trace(x, Vec::new(), combine_unchecked(alpha, x, &tx))
        }
        SchemeId::Ishikawa => {
            let tx = s.t(x)?;
            let y = combine_unchecked(beta, x, &tx);
            let ty = s.t(&y)?;
            let out = combine_unchecked(alpha, x, &ty);
            s.trace(x, alloc::vec![("y", y)], out)
        }
        SchemeId::Noor => {
            let tx = s.t(x)?;
            let z = combine_unchecked(gamma, x, &tx);
            let tz = s.t(&z)?;
            let y = combine_unchecked(beta, x, &tz);
            let ty = s.t(&y)?;
            let out = combine_unchecked(alpha, x, &ty);
            s.trace(x, alloc::vec![("z", z), ("y", y)], out)
        }
        other => Err(Error::InvalidArgument(alloc::format!("`{other}` is not a classic scheme"))),
    }
}

/// One K step: `z = (1−β)x + βTx`, `y = T((1−α)Tx + αTz)`, `x' = Ty`.
pub fn step_k(m: &Mapping, x: &Point, alpha: f64, beta: f64) -> Result<StepTrace> {
    check_step_args(m, x, &[("alpha", alpha), ("beta", beta)])?;
    step_k_at(m, 0, x, alpha, beta)
}

/// One Picard-S step.
pub fn step_picard_s(m: &Mapping, u: &Point, alpha: f64, beta: f64) -> Result<StepTrace> {
    check_step_args(m, u, &[("alpha", alpha), ("beta", beta)])?;
    step_picard_s_at(m, 0, u, alpha, beta)
}

/// One Thakur New step.
pub fn step_thakur_new(m: &Mapping, u: &Point, alpha: f64, beta: f64) -> Result<StepTrace> {
    check_step_args(m, u, &[("alpha", alpha), ("beta", beta)])?;
    step_thakur_new_at(m, 0, u, alpha, beta)
}

/// One Vatan two-step step.
pub fn step_vatan_two_step(m: &Mapping, u: &Point, alpha: f64, beta: f64) -> Result<StepTrace> {
    check_step_args(m, u, &[("alpha", alpha), ("beta", beta)])?;
    step_vatan_two_step_at(m, 0, u, alpha, beta)
}

/// One step of Picard, Mann, Ishikawa or Noor. `gamma` only matters for Noor.
pub fn step_classic(id: SchemeId, m: &Mapping, x: &Point, alpha: f64, beta: f64, gamma: f64) -> Result<StepTrace> {
    check_step_args(m, x, &[("alpha", alpha), ("beta", beta), ("gamma", gamma)])?;
    step_classic_at(id, m, 0, x, alpha, beta, gamma)
}

/// Dispatches to the step function of `id`. Noor's γ defaults to β.
pub fn step(id: SchemeId, m: &Mapping, x: &Point, alpha: f64, beta: f64, gamma: Option<f64>) -> Result<StepTrace> {
    step_n(id, m, 0, x, alpha, beta, gamma.unwrap_or(beta))
}

fn step_n(id: SchemeId, m: &Mapping, n: usize, x: &Point, alpha: f64, beta: f64, gamma: f64) -> Result<StepTrace> {
    check_step_args(m, x, &[("alpha", alpha), ("beta", beta), ("gamma", gamma)]).map_err(|e| match e {
        Error::OutsideDomain { context, .. } => Error::OutsideDomain { context, step: n },
        e => e,
    })?;
    match id {
        SchemeId::K => step_k_at(m, n, x, alpha, beta),
        SchemeId::PicardS => step_picard_s_at(m, n, x, alpha, beta),
        SchemeId::ThakurNew => step_thakur_new_at(m, n, x, alpha, beta),
        SchemeId::VatanTwoStep => step_vatan_two_step_at(m, n, x, alpha, beta),
        _ => step_classic_at(id, m, n, x, alpha, beta, gamma),
    }
}

/// When to stop an orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StopRule {
    /// Maximum number of steps, at least 1.
    pub max_iter: usize,
    /// Stop once `‖x_{n+1} − x_n‖ ≤ tol_step`. `None` disables.
    pub tol_step: Option<f64>,
    /// Stop once `‖T x_{n+1} − x_{n+1}‖ ≤ tol_res`. `None` disables.
    pub tol_res: Option<f64>,
    /// With `tol_step` disabled, still stop when the iterate repeats exactly.
    pub stop_on_stall: bool,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule { max_iter: 100, tol_step: Some(0.0), tol_res: Some(0.0), stop_on_stall: true }
    }
}

impl StopRule {
    /// Exactly `n` steps, no early exit.
    pub fn fixed_count(n: usize) -> Self {
        StopRule { max_iter: n, tol_step: None, tol_res: None, stop_on_stall: false }
    }

    fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::OutOfRange { name: "max_iter", value: 0.0 });
        }
        for (name, tol) in [("tol_step", self.tol_step), ("tol_res", self.tol_res)] {
            if let Some(t) = tol {
                if !(t >= 0.0) {
                    return Err(Error::OutOfRange { name, value: t });
                }
            }
        }
        Ok(())
    }
}

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StopReason {
    /// Successive difference within `tol_step`.
    TolReached,
    /// Residual within `tol_res`.
    ResidualReached,
    /// Step budget exhausted.
    MaxIter,
    /// Iterate repeated exactly with step tolerance disabled.
    Stalled,
}

/// One row of a trajectory.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Record {
    /// Index n.
    pub n: usize,
    /// Iterate x_n.
    pub x: Point,
    /// `‖T x_n − x_n‖`.
    pub residual: f64,
    /// `‖x_n − p‖` when the mapping carries a fixed point.
    pub error: Option<f64>,
    /// Step that produced `x_{n+1}` from `x_n`; absent on the last record.
    pub trace: Option<StepTrace>,
}

/// An orbit of one scheme.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Trajectory {
    /// Scheme that generated the orbit.
    pub scheme: SchemeId,
    /// Id of the mapping iterated.
    pub mapping: String,
    /// Parameter schedule.
    pub schedule: ParamSchedule,
    /// Noor's γ when it differs from β.
    pub gamma: Option<f64>,
    /// Starting point.
    pub x0: Point,
    /// `records[n].x = x_n`.
    pub records: Vec<Record>,
    /// Why iteration ended.
    pub stop_reason: StopReason,
}

impl Trajectory {
    /// Iterates `x_0, x_1, ...` in order.
    pub fn iterates(&self) -> impl Iterator<Item = &Point> + '_ {
        self.records.iter().map(|r| &r.x)
    }

    /// Last iterate.
    pub fn last(&self) -> &Point {
        &self.records.last().expect("trajectory always holds x0").x
    }

    /// Number of steps taken.
    pub fn steps(&self) -> usize {
        self.records.len() - 1
    }
}

fn overflow(e: Error) -> Error {
    match e {
        Error::NonFinite { .. } => Error::NonFinite { context: "iterate" },
        e => e,
    }
}

/// Iterates scheme `id` from `x0` until the stop rule fires.
pub fn run(id: SchemeId, m: &Mapping, x0: &Point, s: &ParamSchedule, stop: &StopRule) -> Result<Trajectory> {
    run_with_gamma(id, m, x0, s, stop, None)
}

/// As [`run`], with an explicit γ for Noor (defaults to β_n).
pub fn run_with_gamma(
    id: SchemeId,
    m: &Mapping,
    x0: &Point,
    s: &ParamSchedule,
    stop: &StopRule,
    gamma: Option<f64>,
) -> Result<Trajectory> {
    stop.validate()?;
    if x0.dim() != m.domain().dim() {
        return Err(Error::DimensionMismatch { expected: m.domain().dim(), found: x0.dim() });
    }
    if !m.domain().contains_with_slack(x0, TOLERANCE) {
        return Err(Error::OutsideDomain { context: "x0", step: 0 });
    }
    let p = m.fixed_point_hint();
    let error_of = |x: &Point| p.map(|p| distance_unchecked(x, p));

    let mut records =
        alloc::vec![Record { n: 0, x: x0.clone(), residual: m.residual(x0)?, error: error_of(x0), trace: None }];
    let mut stop_reason = StopReason::MaxIter;
    for n in 0..stop.max_iter {
        let (alpha, beta) = schedule_at(s, n)?;
        let x = records[n].x.clone();
        let trace = step_n(id, m, n, &x, alpha, beta, gamma.unwrap_or(beta)).map_err(overflow)?;
        let next = trace.output.clone();
        let residual = m.residual(&next).map_err(overflow)?;
        let diff = distance_unchecked(&next, &x);
        records[n].trace = Some(trace);
        records.push(Record { n: n + 1, error: error_of(&next), x: next, residual, trace: None });

        if stop.tol_step.is_some_and(|t| diff <= t) {
            stop_reason = StopReason::TolReached;
            break;
        }
        if stop.tol_res.is_some_and(|t| residual <= t) {
            stop_reason = StopReason::ResidualReached;
            break;
        }
        if stop.tol_step.is_none() && stop.stop_on_stall && diff == 0.0 {
            stop_reason = StopReason::Stalled;
            break;
        }
    }
    Ok(Trajectory {
        scheme: id,
        mapping: m.id().to_string(),
        schedule: s.clone(),
        gamma,
        x0: x0.clone(),
        records,
        stop_reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{builtin_cbrt_map, catalog, CBRT_FIXED_POINT};
    use core::sync::atomic::Ordering;

    fn p(x: f64) -> Point {
        Point::scalar(x)
    }

    fn t(x: f64) -> f64 {
        libm::cbrt(x + 2.0)
    }

    #[test]
    fn first_row_of_reference_table() {
        let m = builtin_cbrt_map();
        let x = p(1.99);
        let cases = [
            (step_k(&m, &x, 0.25, 0.25).unwrap(), 1.522643193061496),
            (step_picard_s(&m, &x, 0.25, 0.25).unwrap(), 1.530160376515624),
            (step_thakur_new(&m, &x, 0.25, 0.25).unwrap(), 1.530163443560674),
            (step_vatan_two_step(&m, &x, 0.25, 0.25).unwrap(), 1.527152378405542),
        ];
        for (trace, want) in cases {
            assert!((trace.output[0] - want).abs() < 1e-12, "{} vs {want}", trace.output[0]);
        }
    }

    #[test]
    fn k_step_by_hand() {
        let m = builtin_cbrt_map();
        let (a, b, x) = (0.3, 0.6, 0.7);
        let tx = t(x);
        let z = (1.0 - b) * x + b * tx;
        let y = t((1.0 - a) * tx + a * t(z));
        let tr = step_k(&m, &p(x), a, b).unwrap();
        assert_eq!(tr.intermediates[0], ("z", p(z)));
        assert_eq!(tr.intermediates[1], ("y", p(y)));
        assert_eq!(tr.output, p(t(y)));
    }

    #[test]
    fn fixed_point_is_preserved() {
        let m = catalog("half").unwrap();
        let zero = p(0.0);
        for id in SchemeId::ALL {
            let tr = step(id, &m, &zero, 0.3, 0.7, None).unwrap();
            assert_eq!(tr.output, zero);
            assert!(tr.intermediates.iter().all(|(_, v)| *v == zero));
        }
    }

    #[test]
    fn degenerate_collapses() {
        let m = builtin_cbrt_map();
        let x = p(1.99);
        for beta in [0.0, 0.25, 1.0] {
            assert_eq!(step_k(&m, &x, 0.0, beta).unwrap().output, p(t(t(t(1.99)))));
            assert_eq!(step_picard_s(&m, &x, 0.0, beta).unwrap().output, p(t(t(1.99))));
            assert_eq!(step_thakur_new(&m, &x, 0.0, beta).unwrap().output, p(t(t(1.99))));
        }
        assert_eq!(step_vatan_two_step(&m, &x, 0.0, 0.0).unwrap().output, p(t(t(1.99))));
        let picard = step_classic(SchemeId::Picard, &m, &x, 0.0, 0.0, 0.0).unwrap();
        assert!((picard.output[0] - 1.5860771138627698).abs() < 1e-15);
        assert_eq!(step_classic(SchemeId::Mann, &m, &x, 1.0, 0.4, 0.0).unwrap().output, picard.output);
        assert_eq!(step_classic(SchemeId::Ishikawa, &m, &x, 0.0, 0.7, 0.0).unwrap().output, x);
    }

    #[test]
    fn noor_gamma_defaults_to_beta() {
        let m = builtin_cbrt_map();
        let x = p(0.5);
        let explicit = step_classic(SchemeId::Noor, &m, &x, 0.4, 0.6, 0.6).unwrap();
        assert_eq!(step(SchemeId::Noor, &m, &x, 0.4, 0.6, None).unwrap(), explicit);
        assert_ne!(step(SchemeId::Noor, &m, &x, 0.4, 0.6, Some(0.1)).unwrap().output, explicit.output);
    }

    #[test]
    fn evaluation_counts() {
        let (m, counter) = builtin_cbrt_map().instrumented();
        for id in SchemeId::ALL {
            counter.store(0, Ordering::Relaxed);
            step(id, &m, &p(1.0), 0.5, 0.5, None).unwrap();
            assert_eq!(counter.load(Ordering::Relaxed), id.evaluations_per_step(), "{id}");
        }
    }

    #[test]
    fn step_argument_errors() {
        let m = builtin_cbrt_map();
        assert!(matches!(step_k(&m, &p(1.0), 1.5, 0.5), Err(Error::OutOfRange { name: "alpha", .. })));
        assert!(matches!(step_k(&m, &p(5.0), 0.5, 0.5), Err(Error::OutsideDomain { .. })));
        assert!(matches!(step_classic(SchemeId::K, &m, &p(1.0), 0.5, 0.5, 0.5), Err(Error::InvalidArgument(_))));
        let dbl = catalog("double").unwrap();
        assert!(matches!(step_k(&dbl, &p(0.4), 0.5, 0.5), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn scheme_ids_round_trip() {
        for id in SchemeId::ALL {
            assert_eq!(id.as_str().parse::<SchemeId>().unwrap(), id);
        }
        assert!("K".parse::<SchemeId>().is_err());
    }

    #[test]
    fn run_from_fixed_point_stops_at_once() {
        let m = catalog("half").unwrap();
        let s = ParamSchedule::constant(0.5, 0.5).unwrap();
        for id in SchemeId::ALL {
            let tr = run(id, &m, &p(0.0), &s, &StopRule::default()).unwrap();
            assert_eq!(tr.stop_reason, StopReason::TolReached);
            assert_eq!(tr.steps(), 1);
            assert!(tr.iterates().all(|x| *x == p(0.0)));
        }
    }

    #[test]
    fn picard_on_half_is_geometric() {
        let m = catalog("half").unwrap();
        let s = ParamSchedule::constant(0.5, 0.5).unwrap();
        let stop = StopRule { max_iter: 60, tol_step: Some(1e-6), tol_res: None, stop_on_stall: true };
        let tr = run(SchemeId::Picard, &m, &p(1.0), &s, &stop).unwrap();
        for r in &tr.records {
            assert_eq!(r.x[0], libm::ldexp(1.0, -(r.n as i32)));
            assert_eq!(r.error, Some(r.x[0]));
        }
        assert_eq!(tr.stop_reason, StopReason::TolReached);
        // ‖x_{n+1} − x_n‖ = 2^{-(n+1)} ≤ 1e-6 first at n+1 = 20
        assert_eq!(tr.steps(), 20);
        let full = run(SchemeId::Picard, &m, &p(1.0), &s, &StopRule::fixed_count(60)).unwrap();
        assert_eq!(full.stop_reason, StopReason::MaxIter);
        assert_eq!(full.records.len(), 61);
    }

    #[test]
    fn run_records_traces_and_reasons() {
        let m = builtin_cbrt_map();
        let s = ParamSchedule::constant(0.25, 0.25).unwrap();
        let tr = run(SchemeId::K, &m, &p(1.99), &s, &StopRule::fixed_count(11)).unwrap();
        assert_eq!(tr.records.len(), 12);
        assert_eq!(tr.records[0].x, p(1.99));
        for (i, r) in tr.records.iter().enumerate() {
            assert_eq!(r.n, i);
        }
        assert!(tr.records[..11].iter().all(|r| r.trace.is_some()));
        assert!(tr.records[11].trace.is_none());
        assert_eq!(tr.records[0].trace.as_ref().unwrap().output, tr.records[1].x);

        let res = StopRule { max_iter: 100, tol_step: None, tol_res: Some(1e-9), stop_on_stall: false };
        let tr = run(SchemeId::K, &m, &p(1.99), &s, &res).unwrap();
        assert_eq!(tr.stop_reason, StopReason::ResidualReached);
        assert!(tr.records.last().unwrap().residual <= 1e-9);

        let stall = StopRule { max_iter: 100, tol_step: None, tol_res: None, stop_on_stall: true };
        let tr = run(SchemeId::K, &m, &p(1.99), &s, &stall).unwrap();
        assert_eq!(tr.stop_reason, StopReason::Stalled);
        assert!((tr.last()[0] - CBRT_FIXED_POINT).abs() < 5e-16);
    }

    #[test]
    fn run_errors() {
        let m = builtin_cbrt_map();
        let s = ParamSchedule::constant(0.25, 0.25).unwrap();
        assert!(run(SchemeId::K, &m, &p(1.0), &s, &StopRule::fixed_count(0)).is_err());
        assert!(matches!(
            run(SchemeId::K, &m, &p(-1.0), &s, &StopRule::default()),
            Err(Error::OutsideDomain { context: "x0", .. })
        ));
        let short = ParamSchedule::tabulated(alloc::vec![(0.5, 0.5); 3]).unwrap();
        assert!(matches!(
            run(SchemeId::K, &m, &p(1.0), &short, &StopRule::fixed_count(5)),
            Err(Error::ScheduleExhausted { index: 3, .. })
        ));
        let blowup = Mapping::scalar("blowup", f64::MIN, f64::MAX, |x| x * 1e300).unwrap();
        assert!(matches!(
            run(SchemeId::Picard, &blowup, &p(2.0), &s, &StopRule::fixed_count(5)),
            Err(Error::NonFinite { context: "iterate" })
        ));
    }
}
