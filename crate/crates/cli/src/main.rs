//! Command-line surface for the reusable-holdout toolkit.
//!
//! Exit codes: 0 on success, 2 for usage errors, 3 for resource errors.

mod bounds_cmd;
mod experiment;
mod mm_demo;
mod sparse_demo;
mod util;

use adaptive_holdout::Error as LibError;
use clap::{Parser, Subcommand};

#[derive(Debug)]
pub struct CliError {
    message: String,
    exit_code: i32,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { message: message.into(), exit_code: 2 }
    }
}

impl From<LibError> for CliError {
    fn from(err: LibError) -> Self {
        let exit_code = match err {
            LibError::ResourceLimit(_) => 3,
            _ => 2,
        };
        Self { message: err.to_string(), exit_code }
    }
}

/// Run `f` under the worker cap from ADAPTIVE_HOLDOUT_THREADS (0 = auto).
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let cap = std::env::var("ADAPTIVE_HOLDOUT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    if cap == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(cap).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "adaptive-holdout",
    version,
    about = "Reusable-holdout mechanisms, information bounds, and the overfitting study"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the variable-selection overfitting experiment and write CSV.
    Experiment(experiment::ExperimentArgs),
    /// Bound and composition calculators.
    Bounds {
        #[command(subcommand)]
        command: bounds_cmd::BoundsCommand,
    },
    /// Drive a Median Mechanism session and print its transcript.
    MmDemo(mm_demo::MmDemoArgs),
    /// Drive SparseValidate with a built-in adaptive analyst.
    SparseDemo(sparse_demo::SparseDemoArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Experiment(args) => experiment::run(args),
        Command::Bounds { command } => bounds_cmd::run(command),
        Command::MmDemo(args) => mm_demo::run(args),
        Command::SparseDemo(args) => sparse_demo::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {}", err.message);
        std::process::exit(err.exit_code);
    }
}
