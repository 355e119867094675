mod commands;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use paramquant::LloydVariant;

use commands::{LloydArgs, SweepArgs};

/// Optimal quantizers under height-parameterized power-law distortion.
#[derive(Parser)]
#[command(name = "paramquant", version)]
struct Cli {
    /// Worker threads for grid classification and restarts (default: all cores).
    #[arg(long, global = true, env = "PARAMQUANT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form N-level optimum on [0, A] under a uniform density.
    Solve1d {
        /// Interval length.
        #[arg(long = "A")]
        length: f64,
        /// Number of levels.
        #[arg(long = "N")]
        levels: usize,
        #[arg(long)]
        gamma: f64,
        /// Also write the result as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run Lloyd-A or Lloyd-B on a scenario and write its artifacts.
    Lloyd {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        variant: Option<Variant>,
        /// Restarts; the best one is reported.
        #[arg(long)]
        seeds: Option<usize>,
        /// Grid cells per axis.
        #[arg(long)]
        resolution: Option<usize>,
        /// Output directory (overrides the scenario).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare Lloyd-A, Lloyd-B and random deployments over alphas and Ns.
    Sweep {
        scenario: PathBuf,
        /// Path-loss exponents, comma separated.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        alphas: Vec<f64>,
        /// Numbers of points, comma separated (default: the scenario's N).
        #[arg(long = "Ns", value_delimiter = ',', num_args = 1..)]
        ns: Vec<usize>,
        /// Random deployments per row.
        #[arg(long, default_value_t = 100)]
        rd: usize,
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<Variant> for LloydVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::A => LloydVariant::A,
            Variant::B => LloydVariant::B,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        Self::Compute(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Compute(e.into())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    match cli.command {
        Command::Solve1d {
            length,
            levels,
            gamma,
            json,
        } => commands::solve1d(length, levels, gamma, json.as_deref()),
        Command::Lloyd {
            scenario,
            variant,
            seeds,
            resolution,
            out,
        } => commands::lloyd(LloydArgs {
            scenario,
            variant: variant.map(Into::into),
            seeds,
            resolution,
            out,
        }),
        Command::Sweep {
            scenario,
            alphas,
            ns,
            rd,
            seeds,
            resolution,
            out,
        } => commands::sweep_cmd(SweepArgs {
            scenario,
            alphas,
            ns,
            rd,
            seeds,
            resolution,
            out,
        }),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
