//! `entangler`: decide, certify, search and inspect universal entanglers.
//!
//! Exit codes: 0 on a positive answer, 3 on a negative one, 4 when the
//! numerics are inconclusive, 2 for bad arguments or input files and 1 for
//! anything else.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{BadInput, Outcome};

#[derive(Parser, Debug)]
#[command(name = "entangler", version, about = "Universal entanglers on C^m ⊗ C^n")]
struct Cli {
    /// Worker threads for restarts and samples; results do not depend on it.
    #[arg(long, global = true, env = "ENTANGLER_THREADS", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    /// Omit wall_time_ms so that reports are byte-reproducible.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a universal entangler exists on C^m ⊗ C^n.
    Exists {
        #[arg(value_parser = dim_parser())]
        m: u64,
        #[arg(value_parser = dim_parser())]
        n: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Certify whether the gate in FILE is a universal entangler.
    Certify {
        file: PathBuf,
        #[command(flatten)]
        optimizer: OptimizerArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Look for a product state that the gate in FILE maps to a product state.
    Witness {
        file: PathBuf,
        #[command(flatten)]
        optimizer: OptimizerArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search for a gate with large guaranteed output entanglement.
    Search {
        #[arg(value_parser = dim_parser())]
        m: u64,
        #[arg(value_parser = dim_parser())]
        n: u64,
        #[arg(long, default_value_t = 50)]
        candidates: usize,
        #[arg(long, default_value_t = 100)]
        hill_steps: usize,
        #[arg(long, default_value_t = 0.05)]
        step_scale: f64,
        /// Restarts per estimate while searching.
        #[arg(long, default_value_t = 16)]
        search_restarts: usize,
        /// Restarts for certifying the winner.
        #[arg(long, default_value_t = 256)]
        final_restarts: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the winning gate here as a matrix file.
        #[arg(long)]
        unitary_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Certify a batch of Haar-random gates.
    HaarStudy {
        #[arg(value_parser = dim_parser())]
        m: u64,
        #[arg(value_parser = dim_parser())]
        n: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        optimizer: OptimizerArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Schmidt spectrum and entanglement of the state in STATEFILE.
    Schmidt {
        statefile: PathBuf,
        #[arg(value_parser = dim_parser())]
        m: u64,
        #[arg(value_parser = dim_parser())]
        n: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct OptimizerArgs {
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    /// Witness tolerance: Λ ≥ 1 − tol counts as a product→product witness.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Λ ≤ 1 − gap-tol certifies a universal entangler.
    #[arg(long, default_value_t = 1e-4)]
    gap_tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

fn dim_parser() -> clap::builder::RangedU64ValueParser<u64> {
    clap::value_parser!(u64).range(1..=4096)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t as usize).build() {
            Ok(pool) => pool.install(|| commands::run(&cli)),
            Err(e) => Err(e.into()),
        },
        None => commands::run(&cli),
    };
    match result {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<BadInput>().is_some() {
                ExitCode::from(Outcome::BAD_INPUT)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
