//! `czcp`: construct, search and verify cross Z-complementary pairs, build the
//! training matrices they seed and simulate channel estimation with them.
//!
//! Every run writes one JSON result document (to `--out`, else
//! `$CZCP_OUT_DIR/<command>.json`, else stdout) and a short summary on stderr.
//! The exit code is 0 when every check passes, 1 when a check fails and 2 on
//! invalid input.

mod commands;
mod output;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use output::Sink;

/// Seed used by randomized commands when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(
    name = "czcp",
    version,
    about = "Cross Z-complementary pairs and sparse training matrices"
)]
struct Cli {
    /// JSON result document [default: $CZCP_OUT_DIR/<command>.json, else stdout]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// CSV artifact [default: beside the JSON document, else embedded in it]
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a pair from one of the systematic constructions
    Construct(commands::ConstructArgs),
    /// Exhaustive search for the largest width of binary pairs of one length
    Search(commands::SearchArgs),
    /// Certify sequence-pair, sequence-set and training-matrix files
    Verify(commands::VerifyArgs),
    /// Check the alternating set built from a pair
    Czcs(commands::CzcsArgs),
    /// Build a training matrix and export it as CSV
    TrainMatrix(commands::TrainArgs),
    /// Monte-Carlo MSE of least-squares channel estimation
    Simulate(commands::SimulateArgs),
    /// Re-run a packaged reference result and diff it against expected values
    Reproduce(reproduce::ReproduceArgs),
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let report = match cli.command {
        Command::Construct(a) => commands::construct(a)?,
        Command::Search(a) => commands::search(a)?,
        Command::Verify(a) => commands::verify(a)?,
        Command::Czcs(a) => commands::czcs(a)?,
        Command::TrainMatrix(a) => commands::train_matrix(a)?,
        Command::Simulate(a) => commands::simulate(a)?,
        Command::Reproduce(a) => reproduce::reproduce(a)?,
    };
    let sink = Sink::resolve(report.command, cli.out.as_deref(), cli.csv.as_deref());
    output::emit(report, &sink)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
