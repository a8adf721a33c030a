//! A-priori error bounds, rate comparison, T-stability and data dependence.

use alloc::vec::Vec;

use crate::mappings::{estimate_contraction_modulus, fixed_point_reference, Mapping};
use crate::numerics::{distance_unchecked, schedule_at, ParamSchedule, Point};
use crate::schemes::{run, step, SchemeId, StopRule, Trajectory};
use crate::{Error, Result, TOLERANCE};

/// Number of trailing terms inspected when deciding that a sequence tends to zero.
pub const WINDOW: usize = 10;
/// A sequence "tends to zero" when its trailing window stays below this.
pub const WINDOW_THRESHOLD: f64 = 1e-8;
/// `berinde_compare` requires the last ratio to fall below this fraction of the first.
pub const BERINDE_DECAY: f64 = 1e-3;

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange { name: "theta", value: theta })
    }
}

fn check_e0(e0: f64) -> Result<()> {
    if e0 >= 0.0 && e0.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange { name: "e0", value: e0 })
    }
}

/// `Π_{k=0}^{n} (1 − α_kβ_k(1−θ))` and `Σ_{k=0}^{n} α_kβ_k`.
fn schedule_product_and_sum(n: usize, theta: f64, s: &ParamSchedule) -> Result<(f64, f64)> {
    let mut prod = 1.0;
    let mut sum = 0.0;
    for k in 0..=n {
        let (a, b) = schedule_at(s, k)?;
        prod *= 1.0 - a * b * (1.0 - theta);
        sum += a * b;
    }
    Ok((prod, sum))
}

/// `θ^{m(n+1)}` evaluated as `(θ^{n+1})^m`, multiplied into `scale` one
/// factor at a time so that bounds of different order share their rounding.
fn scaled_power(scale: f64, theta: f64, n: usize, m: usize) -> f64 {
    let q = rate_ratio_unchecked(theta, n);
    (0..m).fold(scale, |acc, _| acc * q)
}

fn rate_ratio_unchecked(theta: f64, n: usize) -> f64 {
    libm::pow(theta, (n + 1) as f64)
}

/// Error bound for the K iteration after `n + 1` steps:
/// `e0 · θ^{3(n+1)} · Π_{k=0}^{n} (1 − α_kβ_k(1−θ))`.
pub fn bound_k_product(n: usize, e0: f64, theta: f64, s: &ParamSchedule) -> Result<f64> {
    check_theta(theta)?;
    check_e0(e0)?;
    let (prod, _) = schedule_product_and_sum(n, theta, s)?;
    Ok(scaled_power(e0 * prod, theta, n, 3))
}

/// Exponential relaxation of [`bound_k_product`]:
/// `e0 · θ^{3(n+1)} · exp(−(1−θ) Σ_{k=0}^{n} α_kβ_k)`.
pub fn bound_k_exponential(n: usize, e0: f64, theta: f64, s: &ParamSchedule) -> Result<f64> {
    check_theta(theta)?;
    check_e0(e0)?;
    let (_, sum) = schedule_product_and_sum(n, theta, s)?;
    Ok(scaled_power(e0 * libm::exp(-(1.0 - theta) * sum), theta, n, 3))
}

/// Error bound for Picard-S after `n + 1` steps:
/// `e0 · θ^{2(n+1)} · Π_{k=0}^{n} (1 − α_kβ_k(1−θ))`.
pub fn bound_picard_s_product(n: usize, e0: f64, theta: f64, s: &ParamSchedule) -> Result<f64> {
    check_theta(theta)?;
    check_e0(e0)?;
    let (prod, _) = schedule_product_and_sum(n, theta, s)?;
    Ok(scaled_power(e0 * prod, theta, n, 2))
}

/// Ratio of the K bound to the Picard-S bound, `θ^{n+1}`.
pub fn rate_ratio(theta: f64, n: usize) -> Result<f64> {
    check_theta(theta)?;
    Ok(rate_ratio_unchecked(theta, n))
}

/// Outcome of a rate comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RateVerdict {
    /// `a_n / b_n → 0`.
    AFaster,
    /// `b_n / a_n → 0`.
    BFaster,
    /// Neither ratio decays decisively over the horizon.
    Inconclusive,
}

/// Side-by-side bound sequences and their ratio.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RateReport {
    /// Sequence of scheme A.
    pub a: Vec<f64>,
    /// Sequence of scheme B.
    pub b: Vec<f64>,
    /// `a_n / b_n`.
    pub ratio: Vec<f64>,
    /// Verdict.
    pub verdict: RateVerdict,
    /// Modulus used to build the sequences, when they are bounds.
    pub theta: Option<f64>,
    /// Schedule used to build the sequences, when they are bounds.
    pub schedule: Option<ParamSchedule>,
}

fn decays(r: &[f64]) -> bool {
    let (first, last) = (r[0], r[r.len() - 1]);
    r.windows(2).all(|w| w[1] <= w[0]) && r.windows(2).any(|w| w[1] < w[0]) && last < BERINDE_DECAY * first
}

/// Compares two positive sequences over their first `horizon` terms.
///
/// A is declared faster when `a_n/b_n` is non-increasing, not constant, and
/// its last value is below [`BERINDE_DECAY`] times its first; B symmetrically.
pub fn berinde_compare(a: &[f64], b: &[f64], horizon: usize) -> Result<RateReport> {
    if horizon < 2 || a.len() < horizon || b.len() < horizon {
        return Err(Error::InvalidArgument(alloc::format!(
            "horizon {horizon} needs at least 2 terms and at most min(len a, len b) = {}",
            a.len().min(b.len())
        )));
    }
    let (a, b) = (&a[..horizon], &b[..horizon]);
    for seq in [a, b] {
        if let Some((index, &value)) = seq.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::NonPositive { index, value });
        }
    }
    let ratio: Vec<f64> = a.iter().zip(b).map(|(x, y)| x / y).collect();
    let inverse: Vec<f64> = b.iter().zip(a).map(|(x, y)| x / y).collect();
    let verdict = if decays(&ratio) {
        RateVerdict::AFaster
    } else if decays(&inverse) {
        RateVerdict::BFaster
    } else {
        RateVerdict::Inconclusive
    };
    Ok(RateReport { a: a.to_vec(), b: b.to_vec(), ratio, verdict, theta: None, schedule: None })
}

/// Compares the K bound (A) against the Picard-S bound (B) for n < horizon.
pub fn compare_k_with_picard_s(theta: f64, e0: f64, s: &ParamSchedule, horizon: usize) -> Result<RateReport> {
    let a = (0..horizon).map(|n| bound_k_product(n, e0, theta, s)).collect::<Result<Vec<_>>>()?;
    let b = (0..horizon).map(|n| bound_picard_s_product(n, e0, theta, s)).collect::<Result<Vec<_>>>()?;
    let mut report = berinde_compare(&a, &b, horizon)?;
    report.theta = Some(theta);
    report.schedule = Some(s.clone());
    Ok(report)
}

/// True when the last [`WINDOW`] terms all lie below [`WINDOW_THRESHOLD`].
pub fn tends_to_zero(seq: &[f64]) -> bool {
    seq.len() >= WINDOW && seq[seq.len() - WINDOW..].iter().all(|v| *v < WINDOW_THRESHOLD)
}

/// Which implication of the stability biconditional a report exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StabilityDirection {
    /// A prescribed sequence `t_n`; check `ε_n`.
    Forward,
    /// `t_{n+1} = f(T, t_n) + η_n`; check `t_n → p`.
    Backward,
}

/// Data of one T-stability experiment for the K iteration.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StabilityReport {
    /// Which harness produced the report.
    pub direction: StabilityDirection,
    /// Fixed point used.
    pub p: Point,
    /// Sequence `t_0, ..., t_H`.
    pub t: Vec<Point>,
    /// `‖t_n − p‖`.
    pub errors: Vec<f64>,
    /// `ε_n = ‖t_{n+1} − f(T, t_n)‖`, n < H.
    pub eps: Vec<f64>,
    /// `t_n → p` by the window rule.
    pub t_converges: bool,
    /// `ε_n → 0` by the window rule.
    pub eps_converges: bool,
    /// Both or neither converge.
    pub equivalence_holds: bool,
    /// False when the harness precondition fails (backward: `η_n ↛ 0`).
    pub applicable: bool,
}

fn reference_point(m: &Mapping) -> Result<Point> {
    match m.fixed_point_hint() {
        Some(p) => Ok(p.clone()),
        None => fixed_point_reference(m, TOLERANCE),
    }
}

fn finish(direction: StabilityDirection, p: Point, t: Vec<Point>, eps: Vec<f64>, applicable: bool) -> StabilityReport {
    let errors: Vec<f64> = t.iter().map(|x| distance_unchecked(x, &p)).collect();
    let t_converges = tends_to_zero(&errors);
    let eps_converges = tends_to_zero(&eps);
    StabilityReport {
        direction,
        p,
        t,
        errors,
        eps,
        t_converges,
        eps_converges,
        equivalence_holds: t_converges == eps_converges,
        applicable,
    }
}

/// Forward harness: evaluates `ε_n = ‖t_{n+1} − K(t_n)‖` for a prescribed
/// sequence `t_n`, n = 0..horizon.
pub fn stability_forward(
    m: &Mapping,
    s: &ParamSchedule,
    t: &dyn Fn(usize) -> Point,
    horizon: usize,
) -> Result<StabilityReport> {
    let p = reference_point(m)?;
    let seq: Vec<Point> = (0..=horizon).map(t).collect();
    for (n, x) in seq.iter().enumerate() {
        if !m.domain().contains_with_slack(x, TOLERANCE) {
            return Err(Error::OutsideDomain { context: "t_n", step: n });
        }
    }
    let mut eps = Vec::with_capacity(horizon);
    for n in 0..horizon {
        let (a, b) = schedule_at(s, n)?;
        let f = step(SchemeId::K, m, &seq[n], a, b, None)?.output;
        eps.push(distance_unchecked(&seq[n + 1], &f));
    }
    Ok(finish(StabilityDirection::Forward, p, seq, eps, true))
}

/// Backward harness: builds `t_{n+1} = clamp(K(t_n) + η_n)` from `t0`, so
/// that `ε_n ≤ ‖η_n‖`, and reports whether `t_n → p`.
pub fn stability_backward(
    m: &Mapping,
    s: &ParamSchedule,
    t0: &Point,
    noise: &dyn Fn(usize) -> Point,
    horizon: usize,
) -> Result<StabilityReport> {
    let p = reference_point(m)?;
    if !m.domain().contains_with_slack(t0, TOLERANCE) {
        return Err(Error::OutsideDomain { context: "t_n", step: 0 });
    }
    let mut seq = alloc::vec![t0.clone()];
    let mut eps = Vec::with_capacity(horizon);
    let mut noise_norms = Vec::with_capacity(horizon);
    for n in 0..horizon {
        let (a, b) = schedule_at(s, n)?;
        let f = step(SchemeId::K, m, &seq[n], a, b, None)?.output;
        let eta = noise(n);
        if eta.dim() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), found: eta.dim() });
        }
        noise_norms.push(eta.norm());
        let next = m.domain().clamp(&f.map_coords(|i, c| c + eta[i]));
        eps.push(distance_unchecked(&next, &f));
        seq.push(next);
    }
    let applicable = tends_to_zero(&noise_norms);
    Ok(finish(StabilityDirection::Backward, p, seq, eps, applicable))
}

/// Fixed-point drift under an approximate operator.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DataDependenceReport {
    /// Stated bound on `‖Tx − T̃x‖`.
    pub eps: f64,
    /// Largest gap observed on the check grid.
    pub observed_operator_gap: f64,
    /// Estimated modulus θ̂ of `T`.
    pub theta: f64,
    /// Fixed point of `T`.
    pub p: Point,
    /// Limit of the K iteration driven by `T̃`.
    pub p_tilde: Point,
    /// `‖p − p̃‖`.
    pub observed_gap: f64,
    /// `7ε / (1 − θ̂)`.
    pub theoretical_bound: f64,
    /// `α_nβ_n ≥ ½` for every n below the horizon.
    pub schedule_product_ok: bool,
    /// `Σ α_nβ_n = ∞` is certified.
    pub divergent_sum_certified: bool,
    /// `observed_gap ≤ theoretical_bound + 1e-12`; `None` when the schedule
    /// preconditions fail.
    pub bound_holds: Option<bool>,
    /// Steps used to compute `p̃`.
    pub steps: usize,
}

/// Theoretical drift bound `7ε / (1 − θ)`.
pub fn data_dependence_bound(eps: f64, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if !(eps >= 0.0) {
        return Err(Error::OutOfRange { name: "eps", value: eps });
    }
    Ok(7.0 * eps / (1.0 - theta))
}

/// Runs the data-dependence experiment: `p` from the mapping's hint or the
/// reference solver, `p̃`
/// from the K iteration applied to `m_tilde`, started at the domain center.
pub fn data_dependence(
    m: &Mapping,
    m_tilde: &Mapping,
    eps: f64,
    s: &ParamSchedule,
    horizon: usize,
    grid_size: usize,
) -> Result<DataDependenceReport> {
    if m.domain() != m_tilde.domain() {
        return Err(Error::InvalidArgument("T and its approximation must share a domain".into()));
    }
    let mut observed_operator_gap = 0.0f64;
    for x in m.domain().grid(grid_size) {
        observed_operator_gap = observed_operator_gap.max(distance_unchecked(&m.eval(&x)?, &m_tilde.eval(&x)?));
    }
    if observed_operator_gap > eps + TOLERANCE {
        return Err(Error::OperatorGapExceeded { eps, observed: observed_operator_gap });
    }
    let theta = estimate_contraction_modulus(m, grid_size)?;
    let theoretical_bound = data_dependence_bound(eps, theta)?;

    let mut schedule_product_ok = true;
    for n in 0..horizon {
        let (a, b) = schedule_at(s, n)?;
        schedule_product_ok &= a * b >= 0.5;
    }
    let divergent_sum_certified = s.divergent_sum_certified();

    let p = match m.fixed_point_hint() {
        Some(p) => p.clone(),
        None => fixed_point_reference(m, 1e-14)?,
    };
    let stop = StopRule { max_iter: horizon, tol_step: Some(0.0), tol_res: None, stop_on_stall: true };
    let traj = run(SchemeId::K, m_tilde, &m.domain().midpoint(), s, &stop)?;
    let p_tilde = traj.last().clone();
    let observed_gap = distance_unchecked(&p, &p_tilde);
    let bound_holds =
        (schedule_product_ok && divergent_sum_certified).then_some(observed_gap <= theoretical_bound + TOLERANCE);
    Ok(DataDependenceReport {
        eps,
        observed_operator_gap,
        theta,
        p,
        p_tilde,
        observed_gap,
        theoretical_bound,
        schedule_product_ok,
        divergent_sum_certified,
        bound_holds,
        steps: traj.steps(),
    })
}

/// Monotonicity and residual diagnostics of a trajectory.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Diagnostics {
    /// `‖x_n − p‖` along the orbit.
    pub errors: Vec<f64>,
    /// `max_n (‖x_{n+1} − p‖ − ‖x_n − p‖)⁺`.
    pub max_monotonicity_violation: f64,
    /// `‖T x_N − x_N‖` at the last iterate.
    pub final_residual: f64,
    /// `max_n ‖x_n‖`.
    pub max_norm: f64,
}

/// Summarises a trajectory against a fixed point `p`.
pub fn trajectory_diagnostics(traj: &Trajectory, p: &Point) -> Result<Diagnostics> {
    let errors = traj
        .iterates()
        .map(|x| {
            if x.dim() == p.dim() {
                Ok(distance_unchecked(x, p))
            } else {
                Err(Error::DimensionMismatch { expected: x.dim(), found: p.dim() })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let max_monotonicity_violation = errors.windows(2).map(|w| (w[1] - w[0]).max(0.0)).fold(0.0, f64::max);
    let final_residual = traj.records.last().map_or(0.0, |r| r.residual);
    let max_norm = traj.iterates().map(Point::norm).fold(0.0, f64::max);
    Ok(Diagnostics { errors, max_monotonicity_violation, final_residual, max_norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{builtin_cbrt_map, catalog};
    use alloc::vec;

    fn p(x: f64) -> Point {
        Point::scalar(x)
    }

    #[test]
    fn bound_examples() {
        let ones = ParamSchedule::constant(1.0, 1.0).unwrap();
        assert_eq!(bound_k_product(0, 1.0, 0.5, &ones).unwrap(), 0.0625);
        assert_eq!(bound_picard_s_product(0, 1.0, 0.5, &ones).unwrap(), 0.125);
        let ex = bound_k_exponential(0, 1.0, 0.5, &ones).unwrap();
        assert!((ex - 0.125 * libm::exp(-0.5)).abs() < 1e-17);
        assert!((ex - 0.0758163).abs() < 1e-7);
        for n in 0..20 {
            assert_eq!(bound_k_product(n, 0.0, 0.3, &ones).unwrap(), 0.0);
        }
        let picard = ParamSchedule::constant(1.0, 0.0).unwrap();
        let theta: f64 = 0.37;
        let direct = 2.0 * libm::pow(theta, 12.0);
        assert!((bound_k_exponential(3, 2.0, theta, &picard).unwrap() - direct).abs() <= 4.0 * f64::EPSILON * direct);
    }

    #[test]
    fn bound_errors() {
        let s = ParamSchedule::constant(0.5, 0.5).unwrap();
        assert!(bound_k_product(0, 1.0, 1.0, &s).is_err());
        assert!(bound_k_product(0, 1.0, 0.0, &s).is_err());
        assert!(bound_picard_s_product(0, -1.0, 0.5, &s).is_err());
        assert!(rate_ratio(1.5, 0).is_err());
        let short = ParamSchedule::tabulated(vec![(0.5, 0.5)]).unwrap();
        assert!(matches!(bound_k_product(1, 1.0, 0.5, &short), Err(Error::ScheduleExhausted { .. })));
    }

    #[test]
    fn rate_ratio_examples() {
        assert_eq!(rate_ratio(0.5, 0).unwrap(), 0.5);
        assert_eq!(rate_ratio(0.5, 3).unwrap(), 0.0625);
        for n in 0..30 {
            let q = rate_ratio(0.3, n + 1).unwrap() / rate_ratio(0.3, n).unwrap();
            assert!((q - 0.3).abs() < 1e-14);
        }
    }

    #[test]
    fn berinde_examples() {
        let a = vec![1.0; 50];
        assert_eq!(berinde_compare(&a, &a, 50).unwrap().verdict, RateVerdict::Inconclusive);
        let n = 10_000;
        let inv_sq: Vec<f64> = (1..=n).map(|k| 1.0 / (k as f64 * k as f64)).collect();
        let inv: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
        assert_eq!(berinde_compare(&inv_sq, &inv, n).unwrap().verdict, RateVerdict::AFaster);
        assert_eq!(berinde_compare(&inv, &inv_sq, n).unwrap().verdict, RateVerdict::BFaster);
        assert!(matches!(berinde_compare(&[1.0, 0.0], &[1.0, 1.0], 2), Err(Error::NonPositive { index: 1, .. })));
        assert!(berinde_compare(&inv, &inv, n + 1).is_err());
    }

    #[test]
    fn k_bound_beats_picard_s_bound() {
        let s = ParamSchedule::constant(0.25, 0.25).unwrap();
        let r = compare_k_with_picard_s(0.21, 0.47, &s, 20).unwrap();
        assert_eq!(r.verdict, RateVerdict::AFaster);
        assert_eq!(r.theta, Some(0.21));
    }

    #[test]
    fn window_rule() {
        assert!(!tends_to_zero(&[0.0; 9]));
        assert!(tends_to_zero(&[0.0; 10]));
        let mut v = vec![1.0; 5];
        v.extend([1e-9; 10]);
        assert!(tends_to_zero(&v));
        v.push(1e-8);
        assert!(!tends_to_zero(&v));
    }

    #[test]
    fn stability_constant_sequence() {
        let m = builtin_cbrt_map();
        let s = ParamSchedule::constant(0.25, 0.25).unwrap();
        let fp = m.fixed_point_hint().unwrap().clone();
        let r = stability_forward(&m, &s, &|_| fp.clone(), 30).unwrap();
        assert!(r.eps.iter().all(|e| *e <= 4.0 * f64::EPSILON));
        assert!(r.t_converges && r.eps_converges && r.equivalence_holds);
    }

    #[test]
    fn stability_rejects_escaping_sequence() {
        let m = builtin_cbrt_map();
        let s = ParamSchedule::constant(0.25, 0.25).unwrap();
        assert!(matches!(
            stability_forward(&m, &s, &|n| p(n as f64), 10),
            Err(Error::OutsideDomain { context: "t_n", step: 5 })
        ));
    }

    #[test]
    fn backward_without_noise_is_k_orbit() {
        let m = builtin_cbrt_map();
        let s = ParamSchedule::constant(0.25, 0.25).unwrap();
        let r = stability_backward(&m, &s, &p(1.99), &|_| p(0.0), 40).unwrap();
        let orbit = run(SchemeId::K, &m, &p(1.99), &s, &StopRule::fixed_count(40)).unwrap();
        assert!(r.t.iter().zip(orbit.iterates()).all(|(a, b)| a == b));
        assert!(r.applicable && r.t_converges && r.eps_converges);
        let constant = stability_backward(&m, &s, &p(1.99), &|_| p(0.1), 40).unwrap();
        assert!(!constant.applicable);
        assert!(!constant.eps_converges);
    }

    #[test]
    fn data_dependence_identical_operator() {
        let m = builtin_cbrt_map();
        let s = ParamSchedule::constant(0.75, 0.75).unwrap();
        let r = data_dependence(&m, &m, 0.0, &s, 200, 1_000).unwrap();
        assert_eq!(r.theoretical_bound, 0.0);
        assert!(r.observed_gap <= 1e-14);
        assert_eq!(r.bound_holds, Some(true));
    }

    #[test]
    fn data_dependence_formula() {
        let b = data_dependence_bound(0.01, 0.21).unwrap();
        assert!((b - 0.088607594936708).abs() < 1e-14);
        assert!(data_dependence_bound(-1.0, 0.5).is_err());
    }

    #[test]
    fn data_dependence_preconditions() {
        let m = builtin_cbrt_map();
        let quarter = ParamSchedule::constant(0.25, 0.25).unwrap();
        let r = data_dependence(&m, &m.shifted(1e-3), 1e-3, &quarter, 200, 1_000).unwrap();
        assert!(!r.schedule_product_ok);
        assert_eq!(r.bound_holds, None);
        let s = ParamSchedule::constant(0.75, 0.75).unwrap();
        assert!(matches!(
            data_dependence(&m, &m.shifted(1e-2), 1e-3, &s, 200, 1_000),
            Err(Error::OperatorGapExceeded { .. })
        ));
    }

    #[test]
    fn diagnostics_examples() {
        let m = catalog("half").unwrap();
        let s = ParamSchedule::constant(0.5, 0.5).unwrap();
        let tr = run(SchemeId::Picard, &m, &p(1.0), &s, &StopRule::fixed_count(30)).unwrap();
        let d = trajectory_diagnostics(&tr, &p(0.0)).unwrap();
        for (n, e) in d.errors.iter().enumerate() {
            assert_eq!(*e, libm::ldexp(1.0, -(n as i32)));
        }
        assert!(d.errors.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(d.max_monotonicity_violation, 0.0);
        assert_eq!(d.max_norm, 1.0);

        let still = run(SchemeId::K, &m, &p(0.0), &s, &StopRule::fixed_count(5)).unwrap();
        let d = trajectory_diagnostics(&still, &p(0.0)).unwrap();
        assert_eq!((d.max_monotonicity_violation, d.final_residual, d.max_norm), (0.0, 0.0, 0.0));
        assert!(d.errors.iter().all(|e| *e == 0.0));
    }
}
