//! Argument parsing and output plumbing.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{execute, Output};
use crate::config::{parse_point, parse_schemes, CommandKind, Direction, ExperimentConfig, OutputFormat, SequenceKind};
use crate::error::{Result, EXIT_CONFIG, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "fixiter", version, about = "Fixed-point iteration experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterate one scheme and print the orbit.
    Run(Common),
    /// Error curves for several schemes against the fixed point.
    Compare(Common),
    /// Reproduce the cube-root comparison table and check it against the published values.
    Table1(Common),
    /// Stability harness for the K scheme.
    Stability(StabilityArgs),
    /// Fixed-point drift when the map is perturbed by eps.
    Datadep(DatadepArgs),
    /// Grid checks of contraction, nonexpansiveness and related conditions.
    CheckMap(Common),
    /// Error of K against the a-priori bounds.
    Bounds(BoundsArgs),
}

/// A tolerance, or `off` to disable the rule.
#[derive(Debug, Clone, Copy)]
struct Tol(Option<f64>);

fn parse_tol(s: &str) -> std::result::Result<Tol, String> {
    if matches!(s, "off" | "none") {
        return Ok(Tol(None));
    }
    s.parse::<f64>().map(|t| Tol(Some(t))).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct Common {
    /// Scheme id(s), comma separated: k, picard_s, thakur_new, vatan_two_step, picard, mann, ishikawa, noor.
    #[arg(long = "scheme")]
    schemes: Vec<String>,
    /// Map id: cbrt, half, cosine, identity, double.
    #[arg(long)]
    map: Option<String>,
    /// Starting point, comma separated for several coordinates.
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Third parameter of Noor (defaults to beta).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    /// Stop when ‖x_{n+1} − x_n‖ ≤ tol (`off` disables).
    #[arg(long = "tol-step", value_parser = parse_tol)]
    tol_step: Option<Tol>,
    /// Stop when ‖T x_n − x_n‖ ≤ tol (`off` disables).
    #[arg(long = "tol-res", value_parser = parse_tol)]
    tol_res: Option<Tol>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Also write an SVG error plot.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StabilityArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = Direction::Forward)]
    direction: Direction,
    #[arg(long, value_enum, default_value_t = SequenceKind::Geometric)]
    sequence: SequenceKind,
    #[arg(long)]
    horizon: Option<usize>,
}

#[derive(Debug, Args)]
struct DatadepArgs {
    #[command(flatten)]
    common: Common,
    /// Size of the perturbation T̃ = T + eps.
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[arg(long)]
    horizon: Option<usize>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[command(flatten)]
    common: Common,
    /// Contraction modulus; estimated on the grid when omitted.
    #[arg(long)]
    theta: Option<f64>,
}

fn apply(cfg: &mut ExperimentConfig, c: &Common) -> Result<()> {
    if !c.schemes.is_empty() {
        cfg.schemes = parse_schemes(&c.schemes)?;
    }
    if let Some(m) = &c.map {
        cfg.map = m.clone();
    }
    if let Some(x) = &c.x0 {
        cfg.x0 = Some(parse_point(x)?);
    }
    if let Some(a) = c.alpha {
        cfg.alpha = a;
    }
    if let Some(b) = c.beta {
        cfg.beta = b;
    }
    cfg.gamma = c.gamma;
    if let Some(n) = c.max_iter {
        cfg.stop.max_iter = n;
    }
    if let Some(t) = c.tol_step {
        cfg.stop.tol_step = t.0;
    }
    if let Some(t) = c.tol_res {
        cfg.stop.tol_res = t.0;
    }
    cfg.out = c.out.clone();
    cfg.format = c.format;
    cfg.svg = c.svg.clone();
    Ok(())
}

fn build(cmd: Command) -> Result<ExperimentConfig> {
    let cfg = match cmd {
        Command::Run(c) => with(CommandKind::Run, &c)?,
        Command::Compare(c) => {
            let mut cfg = ExperimentConfig::new(CommandKind::Compare);
            cfg.schemes = crate::table1::COLUMNS.to_vec();
            apply(&mut cfg, &c)?;
            cfg
        }
        Command::Table1(c) => with(CommandKind::Table1, &c)?,
        Command::CheckMap(c) => with(CommandKind::CheckMap, &c)?,
        Command::Stability(a) => {
            let mut cfg = with(CommandKind::Stability, &a.common)?;
            cfg.direction = a.direction;
            cfg.sequence = a.sequence;
            if let Some(h) = a.horizon {
                cfg.horizon = h;
            }
            cfg
        }
        Command::Datadep(a) => {
            // the drift bound needs alpha_n * beta_n >= 1/2
            let mut cfg = ExperimentConfig::new(CommandKind::Datadep);
            cfg.alpha = 0.75;
            cfg.beta = 0.75;
            apply(&mut cfg, &a.common)?;
            cfg.eps = Some(a.eps);
            if let Some(h) = a.horizon {
                cfg.horizon = h;
            }
            cfg
        }
        Command::Bounds(a) => {
            let mut cfg = with(CommandKind::Bounds, &a.common)?;
            cfg.theta = a.theta;
            if a.common.max_iter.is_none() {
                cfg.stop.max_iter = 50;
            }
            cfg
        }
    };
    Ok(cfg)
}

fn with(kind: CommandKind, c: &Common) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(kind);
    apply(&mut cfg, c)?;
    Ok(cfg)
}

fn emit(cfg: &ExperimentConfig, out: &Output) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, &out.data)?,
        None => std::io::stdout().lock().write_all(out.data.as_bytes())?,
    }
    if let (Some(path), Some(svg)) = (&cfg.svg, &out.svg) {
        std::fs::write(path, svg)?;
    }
    let mut err = std::io::stderr().lock();
    for line in &out.summary {
        writeln!(err, "{line}")?;
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = build(cli.command).and_then(|cfg| {
        let out = execute(&cfg)?;
        emit(&cfg, &out)?;
        Ok(out.status)
    });
    match result {
        Ok(status) => status,
        Err(e) => {
            eprintln!("fixiter: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> Result<ExperimentConfig> {
        let cli = Cli::try_parse_from(std::iter::once("fixiter").chain(args.iter().copied())).unwrap();
        build(cli.command)
    }

    #[test]
    fn flags_reach_the_config() {
        let c = cfg(&[
            "run",
            "--scheme",
            "picard_s",
            "--map",
            "half",
            "--x0",
            "0.5",
            "--alpha",
            "0.5",
            "--tol-step",
            "off",
        ])
        .unwrap();
        assert_eq!(c.schemes, vec![fixiter_core::SchemeId::PicardS]);
        assert_eq!(c.map, "half");
        assert_eq!(c.x0, Some(vec![0.5]));
        assert_eq!(c.alpha, 0.5);
        assert_eq!(c.beta, 0.25);
        assert_eq!(c.stop.tol_step, None);
    }

    #[test]
    fn command_defaults() {
        assert_eq!(cfg(&["compare"]).unwrap().schemes.len(), 4);
        let d = cfg(&["datadep"]).unwrap();
        assert_eq!((d.alpha, d.beta, d.eps), (0.75, 0.75, Some(1e-3)));
        assert_eq!(cfg(&["bounds"]).unwrap().stop.max_iter, 50);
        assert!(matches!(cfg(&["run", "--scheme", "nope"]), Err(crate::error::CliError::Config(_))));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_cli(["fixiter", "frobnicate"]), EXIT_CONFIG);
        assert_eq!(run_cli(["fixiter", "run", "--alpha", "x"]), EXIT_CONFIG);
    }
}
