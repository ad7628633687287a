//! `schelling`: simulate, sweep, detect structures and evaluate theory
//! curves. Exit codes: 0 success, 1 runtime failure, 2 invalid input.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{detect, percolation, run, stats, sweep, theory};
use config::ConfigError;

#[derive(Debug, Parser)]
#[command(name = "schelling", version, about = "Segregation dynamics on the torus")]
struct Cli {
    /// TOML file with [run], [sweep], ... tables; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the dynamics to termination and report.
    Run(run::RunArgs),
    /// Replicated runs over a parameter grid, as CSV.
    Sweep(sweep::SweepArgs),
    /// Radical regions, firewalls, blocks and chemical paths of a state.
    Detect(detect::DetectArgs),
    /// Closed-form curves as CSV.
    Theory(theory::TheoryArgs),
    /// Site and first-passage percolation samples as CSV.
    Percolation(percolation::PercolationArgs),
    /// Concentration and trend tests.
    Stats(stats::StatsArgs),
}

const EXIT_RUNTIME: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    let file = config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Run(a) => run::execute(file.run, a),
        Command::Sweep(a) => sweep::execute(file.sweep, a),
        Command::Detect(a) => detect::execute(file.detect, a),
        Command::Theory(a) => theory::execute(file.theory, a),
        Command::Percolation(a) => percolation::execute(file.percolation, a),
        Command::Stats(a) => stats::execute(file.stats, a),
    }
}

/// Bad configuration or parameters outside a formula's domain.
fn is_config_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.is::<ConfigError>()
            || c.downcast_ref::<schelling_core::Error>()
                .is_some_and(|e| !matches!(e, schelling_core::Error::NotEligible(_)))
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_config_error(&e) { EXIT_CONFIG } else { EXIT_RUNTIME })
        }
    }
}
