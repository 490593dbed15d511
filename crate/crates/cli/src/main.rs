//! `socnet` command-line front end.
//!
//! Exit status: 0 on success, 1 for usage or configuration errors, 2 for
//! runtime failures such as unreadable inputs or generator saturation.

mod commands;
mod settings;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{FitArgs, GenerateArgs, RankArgs, SampleArgs, SpreadArgs, SweepArgs};

#[derive(Parser)]
#[command(
    name = "socnet",
    version,
    about = "Generate, fit and analyse attributed social networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow a network and write node, edge and trace files.
    Generate(GenerateArgs),
    /// Fit candidate models; rows keep the order given in --models.
    Fit(FitArgs),
    /// Fit and rank candidate models by an information criterion.
    Select(FitArgs),
    /// Minority visibility in node rankings.
    Rank(RankArgs),
    /// Sampling-bias benchmark.
    Sample(SampleArgs),
    /// Run one contagion and report equality over time.
    Spread(SpreadArgs),
    /// Generate over a parameter grid and collect summary metrics.
    Sweep(SweepArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<socnet::Error> for CliError {
    fn from(e: socnet::Error) -> Self {
        match e {
            socnet::Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Fit(a) => commands::fit(a, false),
        Command::Select(a) => commands::fit(a, true),
        Command::Rank(a) => commands::rank(a),
        Command::Sample(a) => commands::sample(a),
        Command::Spread(a) => commands::spread(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
