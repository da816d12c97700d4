//! Command-line front end: `solve`, `sweep`, `simulate` and `evaluate`.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 no equilibrium,
//! 3 I/O failure.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub mod commands;
pub mod config;

/// Environment variable that overrides the default simulation seed.
pub const SEED_ENV: &str = "FEEDCAST_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] feedcast::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Json(_) => 1,
            CliError::Io(_) | CliError::Model(feedcast::Error::Io(_)) => 3,
            CliError::Model(feedcast::Error::NoEquilibrium { .. }) => 2,
            CliError::Model(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "feedcast",
    version,
    about = "Optimal and equilibrium forecasts when the forecast feeds back into policy",
    args_override_self = true
)]
pub struct Cli {
    /// Config file with flat `key=value` lines or a flat JSON object.
    /// Command-line flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal rule under a conjecture, both equilibria, bias and MZ lines (JSON).
    Solve(SolveArgs),
    /// Equilibrium MZ line over a grid of policy uncertainty values (CSV).
    Sweep(SweepArgs),
    /// Play the game repeatedly and summarize forecast errors.
    Simulate(SimulateArgs),
    /// Rolling Mincer-Zarnowitz regressions on a forecast/realization CSV.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SolveArgs {
    /// Mean policy strength.
    #[arg(long)]
    pub mu: f64,
    /// Variance of policy strength.
    #[arg(long)]
    pub tau2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub ytarget: f64,
    /// Intercept of the DM's conjecture (requires --c).
    #[arg(long, requires = "c", allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Slope of the DM's conjecture.
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Outcome noise variance; reported only.
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SweepArgs {
    /// Comma-separated values of the mean policy strength.
    #[arg(long, value_delimiter = ',', required = true)]
    pub mu: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub tau2_min: f64,
    #[arg(long, default_value_t = 0.3)]
    pub tau2_max: f64,
    #[arg(long, default_value_t = 31)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub ytarget: f64,
    /// Adds an `mz_slope_clipped` column clamped to [-CLIP, CLIP].
    #[arg(long)]
    pub clip: Option<f64>,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioKind {
    Equilibrium,
    Taylor,
    Conjecture,
    Conditional,
    Menu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShockKind {
    /// Beta on (0,1) if feasible, otherwise truncated normal; point mass
    /// when the variance is zero.
    Auto,
    Beta,
    TruncatedNormal,
    Degenerate,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = ScenarioKind::Equilibrium)]
    pub scenario: ScenarioKind,
    #[arg(long)]
    pub mu: f64,
    #[arg(long)]
    pub tau2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub ytarget: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta_mean: f64,
    #[arg(long, default_value_t = 1.0)]
    pub theta_var: f64,
    /// Conjecture intercept for the `conjecture` and `conditional` scenarios.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub b: f64,
    /// Conjecture slope for the `conjecture` and `conditional` scenarios.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c: f64,
    /// Assumed action (conditional) or first menu action (menu).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a0: f64,
    /// Second menu action.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub a1: f64,
    #[arg(long, value_enum, default_value_t = ShockKind::Auto)]
    pub shock: ShockKind,
    /// Number of plays.
    #[arg(long, short = 'n')]
    pub n: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Output prefix; writes `<prefix>_draws.csv` and `<prefix>_summary.json`.
    #[arg(long)]
    pub out_prefix: PathBuf,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct EvaluateArgs {
    /// CSV with `period,forecast,realization` columns.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = feedcast::evaluation::DEFAULT_WINDOW)]
    pub window: usize,
    /// Rolling-window output CSV.
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (including the program name) and runs the command, writing
/// human-facing output to `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = config::expand_config_args(args.into_iter().map(Into::into).collect())?;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(stdout, "{e}")?;
                return Ok(());
            }
            return Err(CliError::Usage(e.to_string()));
        }
    };
    match cli.command {
        Command::Solve(a) => commands::solve(&a, stdout),
        Command::Sweep(a) => commands::sweep(&a, stdout),
        Command::Simulate(a) => commands::simulate(&a, stdout),
        Command::Evaluate(a) => commands::evaluate(&a, stdout),
    }
}
