//! The `boseq` command line: each subcommand runs one experiment and writes
//! plot-ready tables plus a JSON summary with checksums.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use output::{format_g17, sha256_hex, write_atomic, Cell, Format, Table, TOOL_VERSION};

use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "boseq", version, about = "Bosonic qubit experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Entanglement entropy of the S^z S^z entangler.
    Entangler(EntanglerArgs),
    /// CNOT analogue and its post-selected site-1 states.
    Cnot(CnotArgs),
    /// Deutsch's algorithm with the four diagonal oracles.
    Deutsch(DeutschArgs),
    /// Continuous-time Grover oscillations.
    Grover(GroverArgs),
    /// Correlator decay under S^z dephasing.
    Dephase(DephaseArgs),
    /// Full bus model against the effective exchange over a detuning sweep.
    Buscheck(BuscheckArgs),
    /// Translate a qubit schedule into its bosonic form.
    Compile(CompileArgs),
    /// Execute a schedule and report observables.
    RunSchedule(RunScheduleArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct Common {
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Worker threads for sweeps; 1 runs sequentially.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct EntanglerArgs {
    #[arg(long = "n", value_delimiter = ',', default_value = "1,5,10,20,30")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub t_max: f64,
    #[arg(long, default_value_t = 400)]
    pub steps: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct CnotArgs {
    #[arg(long = "n", value_delimiter = ',', default_value = "1,2,5,20")]
    pub n: Vec<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct DeutschArgs {
    /// CONST0, CONST1, BAL01, BAL10 or `all`.
    #[arg(long, default_value = "all")]
    pub oracle: String,
    #[arg(long = "n", value_delimiter = ',', default_value = "1,2,5,20")]
    pub n: Vec<usize>,
    /// Oracle time as a multiple of 1/N (default pi/2).
    #[arg(long)]
    pub oracle_time: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct GroverArgs {
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long = "n", value_delimiter = ',', default_value = "1,2,5,10")]
    pub n: Vec<usize>,
    /// Defaults to 1.5 pi sqrt(2^M) / N per N.
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct DephaseArgs {
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long = "n", value_delimiter = ',', default_value = "1,2,3")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 0.05)]
    pub gamma: f64,
    #[arg(long, default_value_t = 5.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct BuscheckArgs {
    #[arg(long = "n", value_delimiter = ',', default_value = "1,2")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    /// Pulse amplitude Omega.
    #[arg(long, default_value_t = 0.01)]
    pub pulse: f64,
    /// Detunings in units of g sqrt(N).
    #[arg(long, value_delimiter = ',', default_value = "10,20,40,50")]
    pub delta_factors: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    pub cutoff: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct CompileArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long = "n")]
    pub n: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct RunScheduleArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Boson number for schedules without a `bosons` line.
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// Initial site states, comma separated from x+, x-, y+, y-, z+, z-; a
    /// single entry applies to every site.
    #[arg(long, default_value = "z+")]
    pub init: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 1 for I/O, 2 for invalid input, 3 for size or truncation refusals.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Core(e) if e.is_numerical_cap() => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
        }
    }
}

/// Applies `BOSEQ_DIM_CAP` and runs the parsed command. Returns the summary JSON.
pub fn run(cli: Cli) -> Result<String, CliError> {
    if let Ok(cap) = std::env::var("BOSEQ_DIM_CAP") {
        let cap: usize = cap.trim().parse().map_err(|_| {
            CliError::Usage(format!("BOSEQ_DIM_CAP must be an integer, got '{cap}'"))
        })?;
        crate::spin::set_dim_cap(cap);
    }
    commands::dispatch(&cli.command)
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("boseq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
