use fixiter_core::analysis::{
    berinde_compare, bound_k_exponential, bound_k_product, bound_picard_s_product, data_dependence, rate_ratio,
    trajectory_diagnostics, RateVerdict,
};
use fixiter_core::mappings::{
    builtin_cbrt_map, catalog, check_condition_c, check_nonexpansive, check_quasi_nonexpansive,
    estimate_contraction_modulus, fixed_point_reference, Mapping,
};
use fixiter_core::numerics::distance;
use fixiter_core::schemes::{run, step, step_k, step_picard_s, step_thakur_new, step_vatan_two_step};
use fixiter_core::{ParamSchedule, Point, SchemeId, StopRule, TOLERANCE};
use proptest::prelude::*;

fn picard(m: &Mapping, x: &Point, times: usize) -> Point {
    (0..times).fold(x.clone(), |x, _| m.eval(&x).unwrap())
}

/// `T(x) = θx + (1−θ)c` on [0, 1]: modulus exactly θ, fixed point c.
fn affine(theta: f64, c: f64) -> Mapping {
    Mapping::scalar("affine", 0.0, 1.0, move |x| theta * x + (1.0 - theta) * c)
        .unwrap()
        .with_theta(theta)
        .unwrap()
        .with_fixed_point(Point::scalar(c))
        .unwrap()
}

fn catalog_contractions() -> Vec<Mapping> {
    ["cbrt", "half", "cosine"].iter().map(|id| catalog(id).unwrap()).collect()
}

/// Smallest horizon ≥ 51 over which the ratio θ^{n+1} drops by three decades.
fn berinde_horizon(theta: f64) -> usize {
    let mut h = 51;
    while theta.powi(h as i32 - 1) >= 1e-3 {
        h += 1;
    }
    h
}

proptest! {
    #[test]
    fn degenerate_collapses(x in 0.0f64..=4.0, beta in 0.0f64..=1.0) {
        let m = builtin_cbrt_map();
        let x = Point::scalar(x);
        prop_assert_eq!(step_k(&m, &x, 0.0, beta).unwrap().output, picard(&m, &x, 3));
        prop_assert_eq!(step_picard_s(&m, &x, 0.0, beta).unwrap().output, picard(&m, &x, 2));
        prop_assert_eq!(step_thakur_new(&m, &x, 0.0, beta).unwrap().output, picard(&m, &x, 2));
        prop_assert_eq!(step_vatan_two_step(&m, &x, 0.0, 0.0).unwrap().output, picard(&m, &x, 2));
        prop_assert_eq!(
            step(SchemeId::Mann, &m, &x, 1.0, beta, None).unwrap().output,
            step(SchemeId::Picard, &m, &x, 1.0, beta, None).unwrap().output
        );
    }

    #[test]
    fn k_step_contracts(
        theta in 0.01f64..0.99,
        c in 0.0f64..=1.0,
        x0 in 0.0f64..=1.0,
        alpha in 0.0f64..=1.0,
        beta in 0.0f64..=1.0,
    ) {
        let m = affine(theta, c);
        let p = Point::scalar(c);
        let s = ParamSchedule::constant(alpha, beta).unwrap();
        let traj = run(SchemeId::K, &m, &Point::scalar(x0), &s, &StopRule::fixed_count(30)).unwrap();
        let factor = theta.powi(3) * (1.0 - alpha * beta * (1.0 - theta));
        for w in traj.records.windows(2) {
            let (e0, e1) = (distance(&w[0].x, &p).unwrap(), distance(&w[1].x, &p).unwrap());
            prop_assert!(e1 <= factor * e0 + TOLERANCE, "{} > {} * {}", e1, factor, e0);
        }
    }

    #[test]
    fn k_step_contracts_on_catalog(x0 in 0.0f64..=1.0, alpha in 0.0f64..=1.0, beta in 0.0f64..=1.0) {
        let s = ParamSchedule::constant(alpha, beta).unwrap();
        for m in catalog_contractions() {
            let theta = m.theta_hint().unwrap();
            let p = m.fixed_point_hint().unwrap().clone();
            let lo = m.domain().lower()[0];
            let hi = m.domain().upper()[0];
            let start = Point::scalar(lo + x0 * (hi - lo));
            let traj = run(SchemeId::K, &m, &start, &s, &StopRule::fixed_count(20)).unwrap();
            let factor = theta.powi(3) * (1.0 - alpha * beta * (1.0 - theta));
            for w in traj.records.windows(2) {
                let (e0, e1) = (distance(&w[0].x, &p).unwrap(), distance(&w[1].x, &p).unwrap());
                prop_assert!(e1 <= factor * e0 + TOLERANCE, "{}: {} > {} * {}", m.id(), e1, factor, e0);
            }
        }
    }

    #[test]
    fn condition_c_maps_have_monotone_error_and_vanishing_residual(
        x0 in 0.0f64..=1.0,
        alpha in 0.05f64..=1.0,
        beta in 0.05f64..=1.0,
    ) {
        let s = ParamSchedule::constant(alpha, beta).unwrap();
        let stop = StopRule { max_iter: 200, ..StopRule::default() };
        for m in catalog_contractions().into_iter().chain([catalog("identity").unwrap()]) {
            let lo = m.domain().lower()[0];
            let hi = m.domain().upper()[0];
            let start = Point::scalar(lo + x0 * (hi - lo));
            let p = m.fixed_point_hint().cloned().unwrap_or_else(|| start.clone());
            let traj = run(SchemeId::K, &m, &start, &s, &stop).unwrap();
            let d = trajectory_diagnostics(&traj, &p).unwrap();
            prop_assert!(d.max_monotonicity_violation <= TOLERANCE, "{}", m.id());
            prop_assert!(d.final_residual < 1e-10, "{}: residual {}", m.id(), d.final_residual);
        }
    }

    #[test]
    fn product_bound_below_exponential_bound(
        theta in 1e-3f64..0.999,
        e0 in 0.0f64..10.0,
        pairs in proptest::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..60),
    ) {
        let s = ParamSchedule::tabulated(pairs.clone()).unwrap();
        for n in 0..pairs.len() {
            let prod = bound_k_product(n, e0, theta, &s).unwrap();
            let exp = bound_k_exponential(n, e0, theta, &s).unwrap();
            prop_assert!(prod <= exp, "n={}: {} > {}", n, prod, exp);
        }
    }

    #[test]
    fn rate_identity_random(theta in 1e-3f64..0.999, alpha in 0.0f64..=1.0, beta in 0.0f64..=1.0, n in 0usize..=50) {
        let s = ParamSchedule::constant(alpha, beta).unwrap();
        let a = bound_k_product(n, 1.0, theta, &s).unwrap();
        let b = bound_picard_s_product(n, 1.0, theta, &s).unwrap();
        prop_assume!(b > f64::MIN_POSITIVE && a > f64::MIN_POSITIVE);
        let r = rate_ratio(theta, n).unwrap();
        prop_assert!((a / b - r).abs() <= 4.0 * f64::EPSILON * r);
    }

    #[test]
    fn berinde_prefers_k(theta_idx in 0usize..4, alpha in 0.01f64..0.99, beta in 0.01f64..0.99) {
        let theta = [0.1, 0.21, 0.5, 0.9][theta_idx];
        let s = ParamSchedule::constant(alpha, beta).unwrap();
        let h = berinde_horizon(theta);
        let a: Vec<f64> = (0..h).map(|n| bound_k_product(n, 1.0, theta, &s).unwrap()).collect();
        let b: Vec<f64> = (0..h).map(|n| bound_picard_s_product(n, 1.0, theta, &s).unwrap()).collect();
        prop_assert_eq!(berinde_compare(&a, &b, h).unwrap().verdict, RateVerdict::AFaster);
    }
}

#[test]
fn bound_domination_on_catalog() {
    let grid = 2000;
    for m in catalog_contractions() {
        let p = m.fixed_point_hint().unwrap().clone();
        let est = estimate_contraction_modulus(&m, grid).unwrap();
        for theta in [est, est * (1.0 + 1e-6)] {
            for (alpha, beta) in [(0.25, 0.25), (0.5, 0.9), (1.0, 1.0), (0.1, 0.0)] {
                let s = ParamSchedule::constant(alpha, beta).unwrap();
                for x0 in m.domain().grid(7) {
                    let traj = run(SchemeId::K, &m, &x0, &s, &StopRule::fixed_count(40)).unwrap();
                    let e0 = distance(&x0, &p).unwrap();
                    for (n, r) in traj.records.iter().skip(1).enumerate() {
                        let e = distance(&r.x, &p).unwrap();
                        let bound = bound_k_product(n, e0, theta, &s).unwrap();
                        assert!(e <= bound + TOLERANCE, "{} n={n}: {e} > {bound}", m.id());
                    }
                }
            }
        }
    }
}

#[test]
fn modulus_non_decreasing_on_nested_grids() {
    for m in catalog_contractions() {
        let mut prev = 0.0;
        for g in [11, 21, 101, 201, 1001] {
            let q = estimate_contraction_modulus(&m, g).unwrap();
            assert!(q >= prev, "{} g={g}: {q} < {prev}", m.id());
            assert!(q < 1.0);
            prev = q;
        }
    }
}

#[test]
fn nonexpansive_implies_condition_c_implies_quasi_nonexpansive() {
    let grid = 400;
    for id in ["cbrt", "half", "cosine", "identity", "double"] {
        let m = catalog(id).unwrap();
        let c = check_condition_c(&m, grid).unwrap();
        if check_nonexpansive(&m, grid).unwrap().passed() {
            assert!(c.passed(), "{id}: nonexpansive but not condition (C)");
        }
        if c.passed() {
            if let Some(p) = m.fixed_point_hint() {
                assert!(check_quasi_nonexpansive(&m, p, grid).unwrap().passed(), "{id}");
            }
        }
    }
}

#[test]
fn reference_fixed_point_substitutes() {
    for m in catalog_contractions() {
        for tol in [1e-6, 1e-12, 1e-15] {
            let p = fixed_point_reference(&m, tol).unwrap();
            assert!(m.residual(&p).unwrap() <= tol, "{}", m.id());
        }
    }
}

#[test]
fn data_dependence_bound_holds() {
    let m = builtin_cbrt_map();
    let s = ParamSchedule::constant(0.75, 0.75).unwrap();
    for eps in [0.0, 1e-4, 1e-3, 1e-2] {
        let r = data_dependence(&m, &m.shifted(eps), eps, &s, 200, 2000).unwrap();
        assert_eq!(r.bound_holds, Some(true), "eps={eps}: {r:?}");
        assert!(r.observed_gap <= r.theoretical_bound + TOLERANCE);
    }
    let r =
        data_dependence(&m, &m.shifted(1e-3), 1e-3, &ParamSchedule::constant(0.25, 0.25).unwrap(), 200, 2000).unwrap();
    assert_eq!(r.bound_holds, None);
}
