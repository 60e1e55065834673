//! Command-line driver behind the `prflow` binary.
//!
//! Every subcommand except `ferus` reads a TOML [`RunConfig`] and writes
//! its artifacts under `<out>/<run id>/` together with a `manifest.json`
//! listing them. Exit codes: 0 success, 1 configuration error, 2
//! computation error.

mod commands;
pub mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::flow::Backend;

pub use config::RunConfig;
pub use output::{Manifest, CSV_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    /// Library errors raised while validating input.
    pub(crate) fn config(e: Error) -> Self {
        Self::Config(e.to_string())
    }

    /// Library errors raised by a computation on validated input.
    pub(crate) fn compute(e: Error) -> Self {
        Self::Compute(e.to_string())
    }

    pub(crate) fn io(e: std::io::Error) -> Self {
        Self::Compute(format!("i/o error: {e}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Compute(_) => EXIT_COMPUTE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "prflow", version, about = "Partial Ricci flow numerical lab")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Parent directory of run directories.
    #[arg(long, global = true, default_value = "runs")]
    pub out: PathBuf,
    /// Run directory name; defaults to the config's `run_id`, then the
    /// command name.
    #[arg(long, global = true)]
    pub run_id: Option<String>,
    /// Replace an existing run directory.
    #[arg(long, global = true)]
    pub force: bool,
    /// Comma-separated split parameters for the convergence estimates.
    #[arg(long, global = true, value_delimiter = ',')]
    pub theta: Option<Vec<f64>>,
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendArg>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Fd,
    Spectral,
    Both,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Fd => Backend::FiniteDifference,
            BackendArg::Spectral => Backend::Spectral,
            BackendArg::Both => Backend::Both,
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Sample the stationary profile and its residual.
    Stationary,
    /// Evolve the warping function; write trajectories, curvature, bounds
    /// and identity residuals.
    Evolve,
    /// Closed-form eigenvalue flow on a geodesic foliation, checked by RK4.
    Eigenflow,
    /// Print whether `p <= rho(n) - 1`.
    Ferus { p: u64, n: u64 },
    /// Parallel grid over lengths, `Phi` factors and boundary data.
    Sweep,
    /// Identity-suite convergence orders and seeded randomized checks.
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Stationary => "stationary",
            Self::Evolve => "evolve",
            Self::Eigenflow => "eigenflow",
            Self::Ferus { .. } => "ferus",
            Self::Sweep => "sweep",
            Self::Verify => "verify",
        }
    }
}

/// Parse `args` (program name first), run the command and return the exit
/// code. Errors are reported on stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match commands::dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
