//! Validated experiment configuration shared by every subcommand.

use std::path::PathBuf;

use fixiter_core::mappings::{catalog, Mapping, DEFAULT_GRID};
use fixiter_core::{ParamSchedule, Point, SchemeId, StopRule};
use serde::Serialize;

use crate::error::{CliError, Result};

/// Environment variable overriding the property-check grid density.
pub const GRID_ENV: &str = "FIXITER_GRID";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Run,
    Compare,
    Table1,
    Stability,
    Datadep,
    CheckMap,
    Bounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// Deterministic test sequences for the stability harness.
///
/// Forward: `t_n = p + c(n)`. Backward: `η_n = c(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    /// `c(n) = 0`.
    Fixed,
    /// Forward `0.3 / 2^n`, backward `0.1 / 2^n`.
    Geometric,
    /// Forward `0.3 (−1)^n`, backward `0.1 (−1)^n`.
    Oscillating,
    /// Forward `0.3`, backward `0.1`.
    Constant,
}

impl SequenceKind {
    pub fn offset(self, direction: Direction, n: usize) -> f64 {
        let scale = match direction {
            Direction::Forward => 0.3,
            Direction::Backward => 0.1,
        };
        match self {
            SequenceKind::Fixed => 0.0,
            SequenceKind::Geometric => scale / 2f64.powi(n.min(2000) as i32),
            SequenceKind::Oscillating => {
                if n % 2 == 0 {
                    scale
                } else {
                    -scale
                }
            }
            SequenceKind::Constant => scale,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub map: String,
    pub schemes: Vec<SchemeId>,
    pub x0: Option<Vec<f64>>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: Option<f64>,
    pub stop: StopRule,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub grid: usize,
    pub eps: Option<f64>,
    pub horizon: usize,
    pub direction: Direction,
    pub sequence: SequenceKind,
    pub theta: Option<f64>,
}

impl ExperimentConfig {
    /// Defaults for `command`; callers overwrite fields from flags.
    pub fn new(command: CommandKind) -> Self {
        ExperimentConfig {
            command,
            map: "cbrt".into(),
            schemes: vec![SchemeId::K],
            x0: None,
            alpha: 0.25,
            beta: 0.25,
            gamma: None,
            stop: StopRule::default(),
            format: OutputFormat::Csv,
            out: None,
            svg: None,
            grid: grid_from_env().unwrap_or(DEFAULT_GRID),
            eps: None,
            horizon: 100,
            direction: Direction::Forward,
            sequence: SequenceKind::Geometric,
            theta: None,
        }
    }

    pub fn mapping(&self) -> Result<Mapping> {
        catalog(&self.map).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn schedule(&self) -> Result<ParamSchedule> {
        ParamSchedule::constant(self.alpha, self.beta).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Starting point: `--x0` if given, else 1.99 for `cbrt` and the domain
    /// center otherwise.
    pub fn start(&self, m: &Mapping) -> Result<Point> {
        let p = match &self.x0 {
            Some(coords) => Point::new(coords.clone()).map_err(|e| CliError::Config(format!("--x0: {e}")))?,
            None if m.id() == "cbrt" => Point::scalar(1.99),
            None => m.domain().midpoint(),
        };
        if p.dim() != m.domain().dim() {
            return Err(CliError::Config(format!(
                "--x0 has {} coordinates, map `{}` is {}-dimensional",
                p.dim(),
                m.id(),
                m.domain().dim()
            )));
        }
        if !m.domain().contains(&p) {
            return Err(CliError::Config(format!("--x0 lies outside the domain of `{}`", m.id())));
        }
        Ok(p)
    }

    /// Rejects unknown ids and out-of-range parameters before anything runs.
    pub fn validate(&self) -> Result<()> {
        let m = self.mapping()?;
        self.schedule()?;
        if let Some(g) = self.gamma {
            if !(0.0..=1.0).contains(&g) {
                return Err(CliError::Config(format!("--gamma {g} is outside [0, 1]")));
            }
        }
        if self.stop.max_iter == 0 {
            return Err(CliError::Config("--max-iter must be at least 1".into()));
        }
        for (flag, tol) in [("--tol-step", self.stop.tol_step), ("--tol-res", self.stop.tol_res)] {
            if tol.is_some_and(|t| !(t >= 0.0)) {
                return Err(CliError::Config(format!("{flag} must be non-negative")));
            }
        }
        if self.grid < 2 {
            return Err(CliError::Config(format!("grid density {} must be at least 2", self.grid)));
        }
        if let Some(e) = self.eps {
            if !(e >= 0.0 && e.is_finite()) {
                return Err(CliError::Config(format!("--eps {e} must be finite and non-negative")));
            }
        }
        if let Some(t) = self.theta {
            if !(t > 0.0 && t < 1.0) {
                return Err(CliError::Config(format!("--theta {t} must lie in (0, 1)")));
            }
        }
        if self.command == CommandKind::Compare && self.schemes.len() < 2 {
            return Err(CliError::Config("compare needs at least two schemes".into()));
        }
        self.start(&m)?;
        Ok(())
    }
}

/// Parses `FIXITER_GRID`, ignoring it when unset.
pub fn grid_from_env() -> Option<usize> {
    std::env::var(GRID_ENV).ok().and_then(|v| v.trim().parse().ok())
}

/// Parses a comma-separated scheme list.
pub fn parse_schemes(items: &[String]) -> Result<Vec<SchemeId>> {
    items
        .iter()
        .flat_map(|s| s.split(','))
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<SchemeId>().map_err(|e| CliError::Config(e.to_string())))
        .collect()
}

/// Parses `--x0`, which may be a comma-separated coordinate list.
pub fn parse_point(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|_| CliError::Config(format!("--x0: cannot parse `{c}`"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for kind in [CommandKind::Run, CommandKind::Table1, CommandKind::Bounds] {
            ExperimentConfig::new(kind).validate().unwrap();
        }
    }

    #[test]
    fn rejects_unknown_ids() {
        let mut cfg = ExperimentConfig::new(CommandKind::Run);
        cfg.map = "tan".into();
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
        assert!(parse_schemes(&["k,abbas".into()]).is_err());
        assert_eq!(
            parse_schemes(&["k, picard_s".into(), "noor".into()]).unwrap(),
            vec![SchemeId::K, SchemeId::PicardS, SchemeId::Noor]
        );
    }

    #[test]
    fn compare_needs_two_schemes() {
        let mut cfg = ExperimentConfig::new(CommandKind::Compare);
        assert!(cfg.validate().is_err());
        cfg.schemes.push(SchemeId::PicardS);
        cfg.validate().unwrap();
    }

    #[test]
    fn parameter_ranges() {
        let mut cfg = ExperimentConfig::new(CommandKind::Run);
        cfg.alpha = 1.5;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(CommandKind::Run);
        cfg.x0 = Some(vec![5.0]);
        assert!(cfg.validate().is_err());
        cfg.x0 = Some(vec![1.0, 2.0]);
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(CommandKind::Run);
        cfg.theta = Some(1.0);
        assert!(cfg.validate().is_err());
        assert!(parse_point("1.5,x").is_err());
        assert_eq!(parse_point("0.5, 0.25").unwrap(), vec![0.5, 0.25]);
    }

    #[test]
    fn sequences() {
        assert_eq!(SequenceKind::Geometric.offset(Direction::Forward, 2), 0.075);
        assert_eq!(SequenceKind::Oscillating.offset(Direction::Backward, 3), -0.1);
        assert_eq!(SequenceKind::Geometric.offset(Direction::Forward, 5000), 0.0);
    }
}
