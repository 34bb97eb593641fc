//! Batch front end: determinant tables, tau curves, limit checks, constant extraction and a self-test.

pub mod config;
pub mod emit;
mod selftest;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

pub use config::{Command, Family, Resolved, RunConfig, Spacing, OUT_DIR_ENV};
pub use emit::{Cell, Format, Table};

use crate::asymptotics::{
    conjectured_c, extract_constant, limit_constants_piii, limit_constants_pv, t1_expansion, ExtractOptions,
};
use crate::error::Error;
use crate::fredholm::{fredholm_det_finite_tol, fredholm_det_semiinfinite_tol, Decay, DetResult};
use crate::kernels::{build_f21_kernel, build_macdonald_kernel, build_whittaker_kernel, IntegrableKernel, KernelParams};
use crate::painleve::{
    integrate_tau, log_endpoint_grid, log_linear_grid, sigma_form_pointwise, sigma_l_curve,
    sigma_m_curve, SigmaFamily, TauCurve,
};

/// Largest sigma-form residual accepted by `limits`.
pub const RESIDUAL_THRESHOLD: f64 = 1e-4;
/// Largest |extracted - conjectured| accepted by `constant`.
pub const CONSTANT_THRESHOLD: f64 = 1e-3;
/// Latest start of the ODE integration for `tau` and `constant`.
const ODE_START: f64 = 1e-3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for configuration and input problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric(e) => match e {
                Error::Domain(_)
                | Error::DegenerateParams(_)
                | Error::InsufficientGrid(_)
                | Error::SingularGamma(_)
                | Error::NoAdmissibleBranch(_) => 2,
                _ => 3,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hyperdet", version, about = "Fredholm determinants, Painleve tau functions and connection constants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: RunConfig,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Fredholm determinant on a grid.
    Det(CommonArgs),
    /// Tau function, sigma and first-integral drift from the ODE route.
    Tau(CommonArgs),
    /// Whittaker or Macdonald determinant with its sigma-form residual.
    Limits(CommonArgs),
    /// Extract the connection constant and compare with the conjectured value.
    Constant(CommonArgs),
    /// Run the golden checks.
    Selftest(CommonArgs),
}

impl Sub {
    pub fn parts(self) -> (Command, CommonArgs) {
        match self {
            Sub::Det(a) => (Command::Det, a),
            Sub::Tau(a) => (Command::Tau, a),
            Sub::Limits(a) => (Command::Limits, a),
            Sub::Constant(a) => (Command::Constant, a),
            Sub::Selftest(a) => (Command::Selftest, a),
        }
    }
}

/// Result of a successful run: the table to emit and whether its checks passed.
#[derive(Debug)]
pub struct Report {
    pub table: Table,
    /// Failed check description; exit code 1.
    pub failed: Option<String>,
    /// Numerical failure after partial output; exit code 3.
    pub partial: Option<Error>,
}

impl Report {
    fn ok(table: Table) -> Self {
        Self { table, failed: None, partial: None }
    }

    pub fn exit_code(&self) -> i32 {
        if self.partial.is_some() {
            3
        } else if self.failed.is_some() {
            1
        } else {
            0
        }
    }
}

/// Resolve flags over the optional config file.
pub fn resolve(command: Command, args: CommonArgs) -> Result<Resolved, CliError> {
    let file = match &args.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    Resolved::new(command, file.merged(args.flags))
}

/// Parse, run, write output; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (command, args) = cli.command.parts();
    let outcome = resolve(command, args).and_then(|cfg| {
        let report = run(&cfg)?;
        emit::emit(&report.table, cfg.format, cfg.out.as_deref())?;
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            if let Some(e) = &report.partial {
                eprintln!("hyperdet: {e}");
            }
            if let Some(msg) = &report.failed {
                eprintln!("hyperdet: check failed: {msg}");
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("hyperdet: {e}");
            e.exit_code()
        }
    }
}

/// Execute a resolved configuration.
pub fn run(cfg: &Resolved) -> Result<Report, CliError> {
    match cfg.command {
        Command::Det => run_det(cfg),
        Command::Tau => run_tau(cfg),
        Command::Limits => run_limits(cfg),
        Command::Constant => run_constant(cfg),
        Command::Selftest => Ok(selftest::run()),
    }
}

/// Grid points from t0 to t1 with the configured spacing.
pub fn build_grid(cfg: &Resolved) -> Vec<f64> {
    let (a, b, n) = (cfg.t0, cfg.t1, cfg.grid);
    if n == 1 {
        return vec![a];
    }
    match (cfg.spacing, cfg.family) {
        (Spacing::Linear, _) => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
        (Spacing::Log, Family::F21) => log_endpoint_grid(a, b, n),
        (Spacing::Log, _) => log_linear_grid(a, b, n),
    }
}

fn params(cfg: &Resolved) -> Result<KernelParams, CliError> {
    Ok(KernelParams::new(cfg.z, cfg.zp, cfg.w, cfg.wp)?)
}

enum LimitKernel {
    Pv(crate::kernels::WhittakerKernel),
    Piii(crate::kernels::MacdonaldKernel),
}

impl LimitKernel {
    fn new(cfg: &Resolved) -> Result<Self, CliError> {
        Ok(match cfg.family {
            Family::Pv => LimitKernel::Pv(build_whittaker_kernel(cfg.z, cfg.zp, cfg.w)?),
            Family::Piii => LimitKernel::Piii(build_macdonald_kernel(cfg.z, cfg.zp)?),
            Family::F21 => return Err(CliError::Config("expected the pv or piii family".into())),
        })
    }

    fn kernel(&self) -> (&dyn IntegrableKernel, Decay) {
        match self {
            LimitKernel::Pv(k) => (k, Decay::Exp),
            LimitKernel::Piii(k) => (k, Decay::ExpSqrt),
        }
    }

    fn det(&self, s: f64, cfg: &Resolved) -> Result<DetResult, Error> {
        let (k, decay) = self.kernel();
        fredholm_det_semiinfinite_tol(k, s, cfg.order, decay, cfg.tol)
    }
}

fn run_det(cfg: &Resolved) -> Result<Report, CliError> {
    let grid = build_grid(cfg);
    let dets: Vec<DetResult> = if cfg.family == Family::F21 {
        let p = params(cfg)?;
        let k = build_f21_kernel(&p)?;
        grid.par_iter()
            .map(|&t| fredholm_det_finite_tol(&k, t, cfg.order, p.c(), cfg.tol))
            .collect::<Result<_, _>>()?
    } else {
        let lk = LimitKernel::new(cfg)?;
        grid.par_iter().map(|&s| lk.det(s, cfg)).collect::<Result<_, _>>()?
    };
    let mut table = Table::new(&[cfg.family.variable(), "D", "log_D", "error_estimate", "order_used"]);
    for (x, d) in grid.iter().zip(&dets) {
        table.push(vec![(*x).into(), d.value.into(), d.log_value.into(), d.error_estimate.into(), d.order_used.into()]);
    }
    Ok(Report::ok(table))
}

fn tau_curve(p: &KernelParams, grid: &[f64], tol: f64) -> Result<TauCurve, Error> {
    integrate_tau(p, ODE_START.min(0.5 * grid[0]), grid, tol)
}

fn run_tau(cfg: &Resolved) -> Result<Report, CliError> {
    let p = params(cfg)?;
    let grid = build_grid(cfg);
    let curve = tau_curve(&p, &grid, cfg.tol)?;
    let mut table = Table::new(&["t", "ln_D", "sigma", "sigma_prime", "i1_drift", "i2_drift"]);
    for i in 0..curve.ln_d.len() {
        table.push(vec![
            curve.sigma.grid[i].into(),
            curve.ln_d[i].into(),
            curve.sigma.sigma[i].into(),
            curve.sigma.sigma_prime[i].into(),
            curve.i1_drift.get(i).copied().into(),
            curve.i2_drift.get(i).copied().into(),
        ]);
    }
    let partial = curve.failure.map(|msg| Error::NonConvergence(msg));
    Ok(Report { table, failed: None, partial })
}

fn run_limits(cfg: &Resolved) -> Result<Report, CliError> {
    let lk = LimitKernel::new(cfg)?;
    let grid = build_grid(cfg);
    let (curve, family) = match &lk {
        LimitKernel::Pv(k) => {
            (sigma_l_curve(k, &grid, cfg.order)?, SigmaFamily::Pv { z: cfg.z, z_prime: cfg.zp, w: cfg.w })
        }
        LimitKernel::Piii(k) => (sigma_m_curve(k, &grid, cfg.order)?, SigmaFamily::Piii { z: cfg.z, z_prime: cfg.zp }),
    };
    let residual = sigma_form_pointwise(&curve, family)?;
    let dets: Vec<DetResult> = grid.par_iter().map(|&s| lk.det(s, cfg)).collect::<Result<_, _>>()?;
    let mut table = Table::new(&[cfg.family.variable(), "D", "log_D", "sigma", "sigma_prime", "residual"]);
    let mut worst = 0.0f64;
    for i in 0..grid.len() {
        let r = residual[i];
        if !r.is_nan() {
            worst = worst.max(r);
        }
        table.push(vec![
            grid[i].into(),
            dets[i].value.into(),
            dets[i].log_value.into(),
            curve.sigma[i].into(),
            curve.sigma_prime[i].into(),
            (!r.is_nan()).then_some(r).into(),
        ]);
    }
    let failed = (worst > RESIDUAL_THRESHOLD)
        .then(|| format!("max sigma-form residual {worst:.3e} exceeds {RESIDUAL_THRESHOLD:e}"));
    Ok(Report { table, failed, partial: None })
}

fn run_constant(cfg: &Resolved) -> Result<Report, CliError> {
    let grid = build_grid(cfg);
    let (samples, model, conjectured, window) = match cfg.family {
        Family::F21 => {
            let p = params(cfg)?;
            let curve = tau_curve(&p, &grid, cfg.tol)?;
            if let Some(msg) = curve.failure {
                return Err(Error::NonConvergence(msg).into());
            }
            let samples: Vec<(f64, f64)> = grid.iter().zip(&curve.ln_d).map(|(&t, &l)| (t, l.exp())).collect();
            (samples, t1_expansion(&p)?, conjectured_c(&p)?, (1.0 - cfg.t1, 1.0 - cfg.t0))
        }
        Family::Pv | Family::Piii => {
            let lk = LimitKernel::new(cfg)?;
            let (model, c) = match cfg.family {
                Family::Pv => limit_constants_pv(cfg.z, cfg.zp, cfg.w)?,
                _ => limit_constants_piii(cfg.z, cfg.zp)?,
            };
            let samples: Vec<(f64, f64)> =
                grid.par_iter().map(|&s| lk.det(s, cfg).map(|d| (s, d.value))).collect::<Result<_, _>>()?;
            (samples, model, c, (cfg.t0, cfg.t1))
        }
    };
    let opts = ExtractOptions { window, fit_exponent: cfg.fit_exponent, conjectured };
    let r = extract_constant(&samples, &model, &opts)?;
    let pass = r.abs_error <= CONSTANT_THRESHOLD;
    let table = Table::record(vec![
        ("family", format!("{:?}", cfg.family).to_lowercase().into()),
        ("z", cfg.z.into()),
        ("zp", cfg.zp.into()),
        ("w", (cfg.family != Family::Piii).then_some(cfg.w).into()),
        ("wp", (cfg.family == Family::F21).then_some(cfg.wp).into()),
        ("log_case", model.is_log_case.into()),
        ("extracted_C", r.extracted_c.into()),
        ("conjectured_C", r.conjectured_c.into()),
        ("abs_error", r.abs_error.into()),
        ("rel_error", r.rel_error.into()),
        ("window_lo", r.fit_window.0.into()),
        ("window_hi", r.fit_window.1.into()),
        ("fit_error", r.fit_error.into()),
        ("correction_coeff", r.correction_coeff.into()),
        ("fit_exponent", r.fit_exponent.into()),
        ("residual_decay_rate", r.residual_decay_rate.into()),
        ("samples_used", r.samples_used.into()),
        ("condition_number", r.condition_number.into()),
        ("pass", pass.into()),
    ]);
    let failed =
        (!pass).then(|| format!("|extracted - conjectured| = {:.3e} exceeds {CONSTANT_THRESHOLD:e}", r.abs_error));
    Ok(Report { table, failed, partial: None })
}
