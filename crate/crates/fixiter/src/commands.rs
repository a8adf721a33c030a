//! Subcommand implementations. Each returns rendered output; writing files
//! is left to the caller.

use fixiter_core::analysis::{
    bound_k_exponential, bound_k_product, bound_picard_s_product, compare_k_with_picard_s, data_dependence, rate_ratio,
    stability_backward, stability_forward, trajectory_diagnostics, RateReport, StabilityReport,
};
use fixiter_core::mappings::{
    check_condition_c, check_contraction, check_nonexpansive, check_prop1_iii, check_quasi_nonexpansive,
    estimate_contraction_modulus, fixed_point_reference, Mapping, PropertyReport,
};
use fixiter_core::schemes::{run_with_gamma, StopReason, Trajectory};
use fixiter_core::{Point, SchemeId, StopRule, TOLERANCE};
use serde::Serialize;

use crate::config::{CommandKind, Direction, ExperimentConfig, OutputFormat};
use crate::error::{CliError, Result, EXIT_GOLDEN_MISMATCH, EXIT_OK};
use crate::report::{fmt_f64, fmt_opt, to_json, CsvTable, InvariantCheck};
use crate::svg::LineChart;
use crate::table1;

/// Distance within which an iterate counts as equal to the fixed point.
pub const CONVERGED_TOLERANCE: f64 = 5e-16;

/// Rendered result of a subcommand.
#[derive(Debug, Clone)]
pub struct Output {
    /// CSV or JSON body for `--out` (or stdout).
    pub data: String,
    /// SVG chart for `--svg`, when the command draws one.
    pub svg: Option<String>,
    /// Human-readable lines for stderr.
    pub summary: Vec<String>,
    /// Process exit status.
    pub status: i32,
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Output> {
    cfg.validate()?;
    match cfg.command {
        CommandKind::Table1 => cmd_table1(cfg),
        CommandKind::Run => cmd_run(cfg),
        CommandKind::Compare => cmd_compare(cfg),
        CommandKind::Stability => cmd_stability(cfg),
        CommandKind::Datadep => cmd_datadep(cfg),
        CommandKind::CheckMap => cmd_check_map(cfg),
        CommandKind::Bounds => cmd_bounds(cfg),
    }
}

fn render<R: Serialize>(
    cfg: &ExperimentConfig,
    csv: &CsvTable,
    results: &R,
    checks: &[InvariantCheck],
) -> Result<String> {
    match cfg.format {
        OutputFormat::Csv => csv.to_string(),
        OutputFormat::Json => to_json(cfg, results, checks),
    }
}

fn point_cells(x: &Point) -> Vec<String> {
    x.iter().map(|v| fmt_f64(*v)).collect()
}

fn point_header(prefix: &str, dim: usize) -> Vec<String> {
    if dim == 1 {
        vec![prefix.to_string()]
    } else {
        (0..dim).map(|i| format!("{prefix}_{i}")).collect()
    }
}

fn join_point(x: &Point) -> String {
    point_cells(x).join(";")
}

/// Fixed point for error curves: the mapping's hint, else the reference
/// solver when the grid says the map is a contraction.
fn ground_truth(m: &Mapping, grid: usize) -> Result<Point> {
    if let Some(p) = m.fixed_point_hint() {
        return Ok(p.clone());
    }
    let theta = estimate_contraction_modulus(m, grid).map_err(CliError::numeric("modulus estimate"))?;
    if theta >= 1.0 {
        return Err(CliError::Config(format!(
            "map `{}` has no known fixed point and is not contractive (estimated modulus {theta}); error curves need a ground truth",
            m.id()
        )));
    }
    fixed_point_reference(m, TOLERANCE).map_err(CliError::numeric("reference fixed point"))
}

fn contraction_modulus(cfg: &ExperimentConfig, m: &Mapping) -> Result<f64> {
    if let Some(t) = cfg.theta {
        return Ok(t);
    }
    let theta = estimate_contraction_modulus(m, cfg.grid).map_err(CliError::numeric("modulus estimate"))?;
    if !(theta > 0.0 && theta < 1.0) {
        return Err(CliError::Config(format!("map `{}` is not a contraction (estimated modulus {theta})", m.id())));
    }
    Ok(theta)
}

// ---------------------------------------------------------------- table1

#[derive(Serialize)]
struct Table1Results {
    columns: Vec<&'static str>,
    rows: Vec<[f64; 4]>,
    max_deviation: f64,
    first_converged_index: Vec<(&'static str, Option<usize>)>,
}

/// First `n` with `|x_n − target| ≤ CONVERGED_TOLERANCE`.
pub fn first_converged_index(values: impl IntoIterator<Item = f64>, target: f64) -> Option<usize> {
    values.into_iter().position(|v| (v - target).abs() <= CONVERGED_TOLERANCE)
}

pub fn cmd_table1(cfg: &ExperimentConfig) -> Result<Output> {
    let t = table1::compute()?;
    let mut csv = CsvTable::new(std::iter::once("n").chain(table1::COLUMNS.iter().map(|c| c.as_str())));
    for (n, row) in t.values.iter().enumerate() {
        csv.push(std::iter::once(n.to_string()).chain(row.iter().map(|v| fmt_f64(*v))).collect());
    }
    let (dev, r, c) = table1::max_deviation(&t);
    let golden = table1::check(&t);
    let first: Vec<_> = table1::COLUMNS
        .iter()
        .enumerate()
        .map(|(c, id)| {
            (
                id.as_str(),
                first_converged_index(t.values.iter().map(|row| row[c]), fixiter_core::mappings::CBRT_FIXED_POINT),
            )
        })
        .collect();
    let checks = vec![InvariantCheck::new(
        "golden_within_1e-12",
        golden.is_ok(),
        format!("max |diff| = {dev:e} at x_{r}, {}", table1::COLUMNS[c]),
    )];
    let results = Table1Results {
        columns: table1::COLUMNS.iter().map(|c| c.as_str()).collect(),
        rows: t.values.clone(),
        max_deviation: dev,
        first_converged_index: first.clone(),
    };
    let mut summary: Vec<String> = first
        .iter()
        .map(|(id, n)| {
            format!("{id}: first index equal to the fixed point = {}", n.map_or("none".into(), |n| n.to_string()))
        })
        .collect();
    let status = match golden {
        Ok(()) => {
            summary.push(format!("table matches the published values (max |diff| = {dev:e})"));
            EXIT_OK
        }
        Err(e) => {
            summary.push(e.to_string());
            EXIT_GOLDEN_MISMATCH
        }
    };
    Ok(Output { data: render(cfg, &csv, &results, &checks)?, svg: None, summary, status })
}

// ---------------------------------------------------------------- run

fn run_scheme(cfg: &ExperimentConfig, id: SchemeId, m: &Mapping, x0: &Point) -> Result<Trajectory> {
    let s = cfg.schedule()?;
    run_with_gamma(id, m, x0, &s, &cfg.stop, cfg.gamma).map_err(CliError::numeric(format!("run {id} on {}", m.id())))
}

fn trajectory_checks(traj: &Trajectory, stop: &StopRule) -> Vec<InvariantCheck> {
    let consecutive = traj.records.iter().enumerate().all(|(i, r)| r.n == i);
    let starts = traj.records[0].x == traj.x0;
    let mut checks = vec![
        InvariantCheck::new("records_consecutive", consecutive, ""),
        InvariantCheck::new("starts_at_x0", starts, ""),
    ];
    if traj.stop_reason == StopReason::TolReached {
        let n = traj.records.len();
        let diff = fixiter_core::numerics::distance(&traj.records[n - 1].x, &traj.records[n - 2].x).unwrap_or(f64::NAN);
        let tol = stop.tol_step.unwrap_or(0.0);
        checks.push(InvariantCheck::new(
            "tol_reached_consistent",
            diff <= tol,
            format!("last step {diff:e} <= {tol:e}"),
        ));
    }
    checks
}

pub fn cmd_run(cfg: &ExperimentConfig) -> Result<Output> {
    let [id] = cfg.schemes[..] else {
        return Err(CliError::Config("run takes exactly one --scheme".into()));
    };
    let m = cfg.mapping()?;
    let x0 = cfg.start(&m)?;
    let traj = run_scheme(cfg, id, &m, &x0)?;
    let mut header = vec!["n".to_string()];
    header.extend(point_header("x", x0.dim()));
    header.extend(["residual".to_string(), "error".to_string()]);
    let mut csv = CsvTable::new(header);
    for r in &traj.records {
        let mut row = vec![r.n.to_string()];
        row.extend(point_cells(&r.x));
        row.extend([fmt_f64(r.residual), fmt_opt(r.error)]);
        csv.push(row);
    }
    let checks = trajectory_checks(&traj, &cfg.stop);
    let svg = match (&cfg.svg, traj.records[0].error) {
        (Some(_), Some(_)) => {
            let errs = traj.records.iter().map(|r| r.error.unwrap_or(0.0)).collect();
            Some(LineChart::log_error(&format!("{id} on {}", m.id()), &[(id.as_str().to_string(), errs)]).render())
        }
        _ => None,
    };
    let last = traj.records.last().expect("non-empty");
    let summary = vec![format!(
        "{id} on {}: {} steps, stop = {:?}, x = {}, residual = {:e}",
        m.id(),
        traj.steps(),
        traj.stop_reason,
        join_point(&last.x),
        last.residual
    )];
    Ok(Output { data: render(cfg, &csv, &traj, &checks)?, svg, summary, status: EXIT_OK })
}

// ---------------------------------------------------------------- compare

#[derive(Serialize)]
struct Curve {
    scheme: SchemeId,
    errors: Vec<f64>,
    first_converged_index: Option<usize>,
    stop_reason: StopReason,
    final_iterate: Point,
}

#[derive(Serialize)]
struct CompareResults {
    fixed_point: Point,
    curves: Vec<Curve>,
    rate_report: Option<RateReport>,
}

fn theoretical_rates(cfg: &ExperimentConfig, m: &Mapping, e0: f64) -> Option<RateReport> {
    let theta = contraction_modulus(cfg, m).ok()?;
    let s = cfg.schedule().ok()?;
    if e0 <= 0.0 {
        return None;
    }
    // stop before the bound sequences leave the normal range
    let mut horizon = 0;
    while horizon < cfg.stop.max_iter {
        let a = bound_k_product(horizon, e0, theta, &s).ok()?;
        if !(a >= f64::MIN_POSITIVE) {
            break;
        }
        horizon += 1;
    }
    if horizon < 2 {
        return None;
    }
    compare_k_with_picard_s(theta, e0, &s, horizon).ok()
}

pub fn cmd_compare(cfg: &ExperimentConfig) -> Result<Output> {
    let m = cfg.mapping()?;
    let x0 = cfg.start(&m)?;
    let p = ground_truth(&m, cfg.grid)?;
    let mut curves = Vec::new();
    for &id in &cfg.schemes {
        let traj = run_scheme(cfg, id, &m, &x0)?;
        let errors: Vec<f64> =
            traj.iterates().map(|x| fixiter_core::numerics::distance(x, &p).unwrap_or(f64::NAN)).collect();
        let first = errors.iter().position(|e| *e <= CONVERGED_TOLERANCE);
        curves.push(Curve {
            scheme: id,
            errors,
            first_converged_index: first,
            stop_reason: traj.stop_reason,
            final_iterate: traj.last().clone(),
        });
    }
    let e0 = fixiter_core::numerics::distance(&x0, &p).unwrap_or(0.0);
    let rate_report = theoretical_rates(cfg, &m, e0);

    let len = curves.iter().map(|c| c.errors.len()).max().unwrap_or(0);
    let mut csv = CsvTable::new(std::iter::once("n".to_string()).chain(curves.iter().map(|c| c.scheme.to_string())));
    for n in 0..len {
        csv.push(
            std::iter::once(n.to_string()).chain(curves.iter().map(|c| fmt_opt(c.errors.get(n).copied()))).collect(),
        );
    }

    let mut checks = Vec::new();
    if let Some(r) = &rate_report {
        checks.push(InvariantCheck::new(
            "bound_k_faster_than_bound_picard_s",
            r.verdict == fixiter_core::analysis::RateVerdict::AFaster,
            format!("theta = {}, horizon = {}", r.theta.unwrap_or(f64::NAN), r.a.len()),
        ));
    }
    if let Some(k) = curves.iter().find(|c| c.scheme == SchemeId::K) {
        let kf = k.first_converged_index;
        let first =
            kf.is_some() && curves.iter().all(|c| c.first_converged_index.map_or(true, |n| kf.is_some_and(|k| k <= n)));
        checks.push(InvariantCheck::new("k_converges_first", first, format!("k first at {kf:?}")));
    }

    let svg = cfg.svg.as_ref().map(|_| {
        let series: Vec<(String, Vec<f64>)> = curves.iter().map(|c| (c.scheme.to_string(), c.errors.clone())).collect();
        LineChart::log_error(&format!("Convergence to the fixed point of `{}`", m.id()), &series).render()
    });
    let mut summary: Vec<String> = curves
        .iter()
        .map(|c| {
            format!(
                "{}: first index within {CONVERGED_TOLERANCE:e} of p = {}",
                c.scheme,
                c.first_converged_index.map_or("none".into(), |n| n.to_string())
            )
        })
        .collect();
    if let Some(r) = &rate_report {
        summary.push(format!("bound comparison (k vs picard_s): {:?}", r.verdict));
    }
    let results = CompareResults { fixed_point: p, curves, rate_report };
    Ok(Output { data: render(cfg, &csv, &results, &checks)?, svg, summary, status: EXIT_OK })
}

// ---------------------------------------------------------------- stability

pub fn cmd_stability(cfg: &ExperimentConfig) -> Result<Output> {
    let m = cfg.mapping()?;
    let s = cfg.schedule()?;
    let p = ground_truth(&m, cfg.grid)?;
    let (dir, seq) = (cfg.direction, cfg.sequence);
    let report: StabilityReport = match dir {
        Direction::Forward => {
            let domain = m.domain().clone();
            let pp = p.clone();
            let t = move |n: usize| {
                let off = seq.offset(dir, n);
                domain.clamp(&Point::new(pp.iter().map(|c| c + off).collect()).expect("finite"))
            };
            stability_forward(&m, &s, &t, cfg.horizon)
        }
        Direction::Backward => {
            let dim = p.dim();
            let eta = move |n: usize| Point::new(vec![seq.offset(dir, n); dim]).expect("finite");
            stability_backward(&m, &s, &cfg.start(&m)?, &eta, cfg.horizon)
        }
    }
    .map_err(CliError::numeric("stability harness"))?;

    let mut header = vec!["n".to_string()];
    header.extend(point_header("t", p.dim()));
    header.extend(["error".to_string(), "eps".to_string()]);
    let mut csv = CsvTable::new(header);
    for (n, t) in report.t.iter().enumerate() {
        let mut row = vec![n.to_string()];
        row.extend(point_cells(t));
        row.extend([fmt_f64(report.errors[n]), fmt_opt(report.eps.get(n).copied())]);
        csv.push(row);
    }
    let checks = vec![
        InvariantCheck::new("eps_nonnegative", report.eps.iter().all(|e| *e >= 0.0), ""),
        InvariantCheck::new(
            "equivalence_holds",
            report.equivalence_holds || !report.applicable,
            format!("t_converges = {}, eps_converges = {}", report.t_converges, report.eps_converges),
        ),
    ];
    let summary = vec![format!(
        "{:?} stability on {} ({:?}): t_n -> p: {}, eps_n -> 0: {}, equivalence: {}, applicable: {}",
        dir,
        m.id(),
        seq,
        report.t_converges,
        report.eps_converges,
        report.equivalence_holds,
        report.applicable
    )];
    Ok(Output { data: render(cfg, &csv, &report, &checks)?, svg: None, summary, status: EXIT_OK })
}

// ---------------------------------------------------------------- datadep

pub fn cmd_datadep(cfg: &ExperimentConfig) -> Result<Output> {
    let m = cfg.mapping()?;
    let s = cfg.schedule()?;
    let eps = cfg.eps.unwrap_or(1e-3);
    let m_tilde = m.shifted(eps);
    let r =
        data_dependence(&m, &m_tilde, eps, &s, cfg.horizon, cfg.grid).map_err(CliError::numeric("data dependence"))?;
    let mut csv = CsvTable::new([
        "eps",
        "theta",
        "p",
        "p_tilde",
        "observed_gap",
        "theoretical_bound",
        "schedule_product_ok",
        "divergent_sum_certified",
        "bound_holds",
    ]);
    csv.push(vec![
        fmt_f64(r.eps),
        fmt_f64(r.theta),
        join_point(&r.p),
        join_point(&r.p_tilde),
        fmt_f64(r.observed_gap),
        fmt_f64(r.theoretical_bound),
        r.schedule_product_ok.to_string(),
        r.divergent_sum_certified.to_string(),
        r.bound_holds.map_or("not_applicable".into(), |b| b.to_string()),
    ]);
    let checks = match r.bound_holds {
        Some(b) => vec![InvariantCheck::new(
            "gap_within_7eps_over_1_minus_theta",
            b == (r.observed_gap <= r.theoretical_bound + TOLERANCE),
            format!("{:e} <= {:e}", r.observed_gap, r.theoretical_bound),
        )],
        None => vec![],
    };
    let summary = vec![match r.bound_holds {
        Some(b) => format!(
            "|p - p~| = {:e}, bound 7eps/(1-theta) = {:e}: {}",
            r.observed_gap,
            r.theoretical_bound,
            if b { "holds" } else { "VIOLATED" }
        ),
        None => "not applicable: schedule needs alpha_n*beta_n >= 1/2 with a divergent sum".to_string(),
    }];
    Ok(Output { data: render(cfg, &csv, &r, &checks)?, svg: None, summary, status: EXIT_OK })
}

// ---------------------------------------------------------------- check-map

pub fn cmd_check_map(cfg: &ExperimentConfig) -> Result<Output> {
    let m = cfg.mapping()?;
    let g = cfg.grid;
    let num = |ctx: &'static str| CliError::numeric(ctx);
    let mut reports: Vec<PropertyReport> = Vec::new();
    if !m.domain().is_degenerate() {
        reports.push(check_contraction(&m, g).map_err(num("contraction"))?);
    }
    reports.push(check_nonexpansive(&m, g).map_err(num("nonexpansive"))?);
    reports.push(check_condition_c(&m, g).map_err(num("condition (C)"))?);
    let p = match m.fixed_point_hint() {
        Some(p) => Some(p.clone()),
        None => fixed_point_reference(&m, TOLERANCE).ok(),
    };
    if let Some(p) = &p {
        reports.push(check_quasi_nonexpansive(&m, p, g).map_err(num("quasi-nonexpansive"))?);
    }
    reports.push(check_prop1_iii(&m, g).map_err(num("prop1 (iii)"))?);

    let mut csv =
        CsvTable::new(["property", "verdict", "samples_checked", "estimated_modulus", "witness_x", "witness_y"]);
    let mut checks = Vec::new();
    for r in &reports {
        let prop = serde_json::to_value(r.property)?.as_str().unwrap_or_default().to_string();
        let verdict = serde_json::to_value(r.verdict)?.as_str().unwrap_or_default().to_string();
        let (wx, wy) =
            r.witness.as_ref().map_or((String::new(), String::new()), |(x, y)| (join_point(x), join_point(y)));
        csv.push(vec![prop.clone(), verdict, r.samples_checked.to_string(), fmt_opt(r.estimated_modulus), wx, wy]);
        if r.witness.is_some() {
            let ok = r.witness_reproduces(&m).unwrap_or(false);
            checks.push(InvariantCheck::new(format!("{prop}_witness_reproduces"), ok, ""));
        }
    }
    let summary = reports
        .iter()
        .map(|r| {
            format!(
                "{:?}: {:?} ({} samples{})",
                r.property,
                r.verdict,
                r.samples_checked,
                r.estimated_modulus.map_or(String::new(), |q| format!(", modulus {q}"))
            )
        })
        .collect();
    Ok(Output { data: render(cfg, &csv, &reports, &checks)?, svg: None, summary, status: EXIT_OK })
}

// ---------------------------------------------------------------- bounds

#[derive(Serialize)]
struct BoundsRow {
    n: usize,
    error_k: f64,
    bound_k_product: f64,
    bound_k_exponential: f64,
    bound_picard_s_product: f64,
    rate_ratio: f64,
}

pub fn cmd_bounds(cfg: &ExperimentConfig) -> Result<Output> {
    let m = cfg.mapping()?;
    let s = cfg.schedule()?;
    let theta = contraction_modulus(cfg, &m)?;
    let p = ground_truth(&m, cfg.grid)?;
    let x0 = cfg.start(&m)?;
    let traj = run_with_gamma(SchemeId::K, &m, &x0, &s, &StopRule::fixed_count(cfg.stop.max_iter), None)
        .map_err(CliError::numeric("k orbit"))?;
    let diag = trajectory_diagnostics(&traj, &p).map_err(CliError::numeric("diagnostics"))?;
    let e0 = diag.errors[0];
    let bounds = |n: usize| -> fixiter_core::Result<BoundsRow> {
        Ok(BoundsRow {
            n,
            error_k: diag.errors[n + 1],
            bound_k_product: bound_k_product(n, e0, theta, &s)?,
            bound_k_exponential: bound_k_exponential(n, e0, theta, &s)?,
            bound_picard_s_product: bound_picard_s_product(n, e0, theta, &s)?,
            rate_ratio: rate_ratio(theta, n)?,
        })
    };
    let rows =
        (0..traj.steps()).map(bounds).collect::<fixiter_core::Result<Vec<_>>>().map_err(CliError::numeric("bounds"))?;
    let dominated = rows.iter().all(|r| r.error_k <= r.bound_k_product + TOLERANCE);
    let ordered = rows.iter().all(|r| r.bound_k_product <= r.bound_k_exponential);
    let checks = vec![
        InvariantCheck::new("k_error_dominated_by_product_bound", dominated, format!("theta = {theta}")),
        InvariantCheck::new("product_bound_below_exponential_bound", ordered, ""),
        InvariantCheck::new(
            "k_error_non_increasing",
            diag.max_monotonicity_violation <= TOLERANCE,
            format!("max violation {:e}", diag.max_monotonicity_violation),
        ),
    ];
    let mut csv = CsvTable::new([
        "n",
        "error_k",
        "bound_k_product",
        "bound_k_exponential",
        "bound_picard_s_product",
        "rate_ratio",
    ]);
    for r in &rows {
        csv.push(vec![
            r.n.to_string(),
            fmt_f64(r.error_k),
            fmt_f64(r.bound_k_product),
            fmt_f64(r.bound_k_exponential),
            fmt_f64(r.bound_picard_s_product),
            fmt_f64(r.rate_ratio),
        ]);
    }
    let summary = vec![format!(
        "theta = {theta}; K error dominated by product bound: {dominated}; product <= exponential: {ordered}"
    )];
    Ok(Output { data: render(cfg, &csv, &rows, &checks)?, svg: None, summary, status: EXIT_OK })
}
