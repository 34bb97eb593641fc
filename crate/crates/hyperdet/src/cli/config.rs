//! Run configuration: flags merged over an optional JSON file, then resolved per command.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use super::emit::Format;
use super::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "HYPERDET_OUT_DIR";

pub const TOL_RANGE: (f64, f64) = (1e-12, 1e-3);
const MAX_ORDER: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Det,
    Tau,
    Limits,
    Constant,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Det => "det",
            Command::Tau => "tau",
            Command::Limits => "limits",
            Command::Constant => "constant",
            Command::Selftest => "selftest",
        }
    }
}

/// Which kernel a command works on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Hypergeometric kernel on (0, t).
    F21,
    /// Whittaker kernel on (s, inf).
    Pv,
    /// Macdonald kernel on (xi, inf).
    Piii,
}

impl Family {
    /// Name of the grid variable in output tables.
    pub fn variable(self) -> &'static str {
        match self {
            Family::F21 => "t",
            Family::Pv => "s",
            Family::Piii => "xi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    /// Uniform in ln(1 - t) for t-grids; uniform in ln x + x for semi-infinite variables.
    Log,
}

/// Every setting, all optional. Used both as the config-file schema and as the flag set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Kernel parameter z
    #[arg(long, allow_negative_numbers = true)]
    pub z: Option<f64>,
    /// Kernel parameter z'
    #[arg(long, allow_negative_numbers = true)]
    pub zp: Option<f64>,
    /// Kernel parameter w (not used by piii)
    #[arg(long, allow_negative_numbers = true)]
    pub w: Option<f64>,
    /// Kernel parameter w' (f21 only)
    #[arg(long, allow_negative_numbers = true)]
    pub wp: Option<f64>,
    /// Start of the grid (t, s or xi depending on the family).
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<f64>,
    /// End of the grid.
    #[arg(long, allow_negative_numbers = true)]
    pub t1: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    /// Quadrature order of the Nystrom discretization.
    #[arg(long)]
    pub order: Option<usize>,
    /// Tolerance, in [1e-12, 1e-3].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file; defaults to $HYPERDET_OUT_DIR/<command>.<ext>, else stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Override of the correction exponent used by `constant`.
    #[arg(long, allow_negative_numbers = true)]
    pub fit_exponent: Option<f64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config file: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merged(self, over: RunConfig) -> RunConfig {
        RunConfig {
            z: over.z.or(self.z),
            zp: over.zp.or(self.zp),
            w: over.w.or(self.w),
            wp: over.wp.or(self.wp),
            t0: over.t0.or(self.t0),
            t1: over.t1.or(self.t1),
            grid: over.grid.or(self.grid),
            spacing: over.spacing.or(self.spacing),
            order: over.order.or(self.order),
            tol: over.tol.or(self.tol),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
            family: over.family.or(self.family),
            fit_exponent: over.fit_exponent.or(self.fit_exponent),
        }
    }
}

/// A configuration with defaults filled in and validated for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub command: Command,
    pub family: Family,
    pub z: f64,
    pub zp: f64,
    pub w: f64,
    pub wp: f64,
    pub t0: f64,
    pub t1: f64,
    pub grid: usize,
    pub spacing: Spacing,
    pub order: usize,
    pub tol: f64,
    pub format: Format,
    /// None means stdout.
    pub out: Option<PathBuf>,
    pub fit_exponent: Option<f64>,
}

struct Defaults {
    range: (f64, f64),
    grid: usize,
    spacing: Spacing,
    order: usize,
    tol: f64,
}

fn defaults(command: Command, family: Family) -> Defaults {
    use Command::*;
    use Family::*;
    let (range, grid, spacing, order, tol) = match (command, family) {
        (Det, F21) => ((0.1, 0.9), 9, Spacing::Linear, 32, 1e-9),
        (Det, Pv) => ((0.5, 20.0), 9, Spacing::Linear, 32, 1e-9),
        (Det, Piii) => ((0.2, 10.0), 9, Spacing::Linear, 32, 1e-9),
        (Tau, _) => ((0.01, 0.999), 200, Spacing::Log, 24, 1e-12),
        (Limits, Pv) | (Limits, F21) => ((0.5, 20.0), 201, Spacing::Log, 60, 1e-9),
        (Limits, Piii) => ((0.2, 10.0), 201, Spacing::Log, 60, 1e-9),
        (Constant, F21) => ((0.95, 0.999), 41, Spacing::Log, 24, 1e-12),
        (Constant, _) => ((1e-3, 5e-2), 41, Spacing::Log, 64, 1e-9),
        (Selftest, _) => ((0.0, 0.0), 1, Spacing::Linear, 32, 1e-9),
    };
    Defaults { range, grid, spacing, order, tol }
}

fn config_err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

impl Resolved {
    pub fn new(command: Command, cfg: RunConfig) -> Result<Self, CliError> {
        let family = match (command, cfg.family) {
            (Command::Limits, None) => Family::Pv,
            (Command::Limits, Some(Family::F21)) => return config_err("limits needs --family pv or piii"),
            (Command::Tau, Some(f)) if f != Family::F21 => return config_err("tau works on the f21 family only"),
            (_, f) => f.unwrap_or(Family::F21),
        };
        let d = defaults(command, family);
        let format = cfg.format.unwrap_or(if command == Command::Constant { Format::Json } else { Format::Csv });
        let out = cfg.out.clone().or_else(|| {
            std::env::var_os(OUT_DIR_ENV)
                .filter(|v| !v.is_empty())
                .map(|dir| PathBuf::from(dir).join(format!("{}.{}", command.name(), format.extension())))
        });
        let r = Resolved {
            command,
            family,
            z: cfg.z.unwrap_or(0.3),
            zp: cfg.zp.unwrap_or(0.2),
            w: cfg.w.unwrap_or(0.4),
            wp: cfg.wp.unwrap_or(0.1),
            t0: cfg.t0.unwrap_or(d.range.0),
            t1: cfg.t1.unwrap_or(d.range.1),
            grid: cfg.grid.unwrap_or(d.grid),
            spacing: cfg.spacing.unwrap_or(d.spacing),
            order: cfg.order.unwrap_or(d.order),
            tol: cfg.tol.unwrap_or(d.tol),
            format,
            out,
            fit_exponent: cfg.fit_exponent,
        };
        if family != Family::F21 && cfg.wp.is_some() {
            return config_err("wp does not apply to the pv and piii families");
        }
        if family == Family::Piii && cfg.w.is_some() {
            return config_err("w does not apply to the piii family");
        }
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.command == Command::Selftest {
            return Ok(());
        }
        if [self.z, self.zp, self.w, self.wp, self.t0, self.t1].iter().any(|v| !v.is_finite()) {
            return config_err("parameters and grid endpoints must be finite");
        }
        if self.grid == 0 {
            return config_err("grid count must be positive");
        }
        if !(self.tol >= TOL_RANGE.0 && self.tol <= TOL_RANGE.1) {
            return config_err(format!("tol must lie in [{:e}, {:e}], got {}", TOL_RANGE.0, TOL_RANGE.1, self.tol));
        }
        if self.order < 2 || self.order > MAX_ORDER {
            return config_err(format!("order must lie in [2, {MAX_ORDER}], got {}", self.order));
        }
        if !(self.t0 < self.t1) && !(self.grid == 1 && self.t0 == self.t1) {
            return config_err(format!("need t0 < t1, got {} and {}", self.t0, self.t1));
        }
        let inside = match self.family {
            Family::F21 => self.t0 > 0.0 && self.t1 < 1.0,
            Family::Pv | Family::Piii => self.t0 > 0.0,
        };
        if !inside {
            let dom = if self.family == Family::F21 { "(0, 1)" } else { "(0, inf)" };
            return config_err(format!("grid [{}, {}] must lie inside {dom}", self.t0, self.t1));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = RunConfig::from_json(r#"{"z": 0.1, "grid": 5}"#).unwrap();
        let flags = RunConfig { z: Some(0.2), ..Default::default() };
        let m = file.merged(flags);
        assert_eq!(m.z, Some(0.2));
        assert_eq!(m.grid, Some(5));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_json(r#"{"zz": 0.1}"#).is_err());
    }

    #[test]
    fn tolerance_range_enforced() {
        for tol in [1e-13, 1e-2] {
            let cfg = RunConfig { tol: Some(tol), ..Default::default() };
            assert!(Resolved::new(Command::Det, cfg).is_err());
        }
    }
}
