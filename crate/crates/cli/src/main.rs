//! `egvqc`: train, compare and benchmark graph-encoded variational classifiers.
//!
//! Exit codes: 0 on success, 2 for usage, configuration or input errors,
//! 1 for failures during a run.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunArgs;

#[derive(Debug, Parser)]
#[command(name = "egvqc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train one pipeline over one or more seeds
    Train(RunArgs),
    /// Train both pipelines on shared splits and seeds, and tabulate accuracy
    Compare(RunArgs),
    /// Time encoding against the spectral baseline on complete graphs
    Bench(BenchArgs),
    /// Dump one graph's encoding, or a demo circuit state with --state
    Inspect(InspectArgs),
}

#[derive(Debug, clap::Args)]
struct BenchArgs {
    /// Vertex counts, each ≥ 4
    #[arg(long, value_delimiter = ',', default_values_t = [16, 32, 64, 128, 256])]
    sizes: Vec<usize>,
    /// Timing samples per size; the median is reported
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Debug, clap::Args)]
struct InspectArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Graph index in file order, from 0
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Also print the scaled spectral feature vector
    #[arg(long)]
    pca: bool,
    /// Print the statevector of a seeded demo circuit instead of a graph
    #[arg(long)]
    state: bool,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Train(args) => commands::train(&args.merged()?.resolve()?),
        Command::Compare(args) => commands::compare(&args.merged()?.resolve()?),
        Command::Bench(args) => commands::bench(&args.sizes, args.samples, &args.out),
        Command::Inspect(args) => {
            let run = args.run.merged()?;
            if args.state {
                commands::inspect_state(&run, args.json)
            } else {
                commands::inspect_graph(&run.resolve()?, args.index, args.pca, args.json)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
