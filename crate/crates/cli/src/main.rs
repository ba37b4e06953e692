//! `garmex`: seasonal long-memory forecasting workflow.
//!
//! Subcommands: `diagnose` (descriptive statistics and long-memory tests),
//! `fit` (two-stage GARMA + variance model estimation), `forecast`
//! (multi-horizon mean/variance paths from a saved bundle), `evaluate`
//! (out-of-sample comparison table) and `simulate` (synthetic data).
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical error.

mod bundle;
mod commands;
mod config;
mod failure;
mod provenance;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Config;
use failure::{CliFailure, CliResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "garmex", version, about = "Seasonal long-memory modelling and forecasting")]
struct Cli {
    /// Seed for every stochastic stage (simulation, optimizer restarts,
    /// network initialisation).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Flat `key = value` configuration file; command-line flags override
    /// file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory where output files are written.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Suppress the human-readable summary on stdout.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Descriptive statistics, periodogram peaks, GPH/LW long-memory tests
    /// and the Ljung-Box test for a CSV series.
    Diagnose(commands::diagnose::DiagnoseArgs),
    /// Fit the GARMA mean model and a conditional-variance model; write a
    /// model bundle.
    Fit(commands::fit::FitArgs),
    /// Multi-horizon mean and variance forecasts from a saved bundle.
    Forecast(commands::forecast::ForecastArgs),
    /// Out-of-sample comparison of one or more bundles on a common split.
    Evaluate(commands::evaluate::EvaluateArgs),
    /// Generate synthetic series from GARMA, G-GARCH or joint models.
    Simulate(commands::simulate::SimulateArgs),
}

/// Global settings shared by every command.
pub struct Ctx {
    pub seed: u64,
    pub config: Config,
    pub out_dir: PathBuf,
    pub quiet: bool,
    pub config_digest: String,
}

impl Ctx {
    fn build(cli: &Cli) -> CliResult<Self> {
        let config = match &cli.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        let seed = config.resolve("seed", cli.seed, 1u64)?;
        let out_dir = match &cli.out_dir {
            Some(dir) => dir.clone(),
            None => PathBuf::from(
                config.raw().get("out_dir").map(String::as_str).unwrap_or("."),
            ),
        };
        if !out_dir.exists() {
            std::fs::create_dir_all(&out_dir).map_err(|e| {
                CliFailure::Data(format!("cannot create out dir {}: {e}", out_dir.display()))
            })?;
        }
        let quiet = cli.quiet || config.raw().get("quiet").map(String::as_str) == Some("true");
        let config_digest = provenance::sha256_hex(config.canonical().as_bytes());
        Ok(Ctx { seed, config, out_dir, quiet, config_digest })
    }

    pub fn say(&self, text: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", text.as_ref());
        }
    }

    pub fn out_path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let ctx = Ctx::build(&cli)?;
    match &cli.command {
        Command::Diagnose(args) => commands::diagnose::run(args, &ctx),
        Command::Fit(args) => commands::fit::run(args, &ctx),
        Command::Forecast(args) => commands::forecast::run(args, &ctx),
        Command::Evaluate(args) => commands::evaluate::run(args, &ctx),
        Command::Simulate(args) => commands::simulate::run(args, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("garmex: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
