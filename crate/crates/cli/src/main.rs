use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod common;
mod failure;
mod output;

use common::Format;
use failure::Failure;

#[derive(Debug, Parser)]
#[command(name = "semwave", version, about = "Wave-mechanical semantics solvers, checks and demos")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "SEMWAVE_OUT", default_value = "semwave-out")]
    out: PathBuf,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Format of written states.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    Eigen(commands::eigen::EigenArgs),
    Evolve(commands::evolve::EvolveArgs),
    Relax(commands::relax::RelaxArgs),
    GaugeCheck(commands::gauge::GaugeArgs),
    Units(commands::units::UnitsArgs),
    RagDemo(commands::rag::RagArgs),
    Fixture(commands::fixture::FixtureArgs),
}

pub struct Global {
    pub out: PathBuf,
    pub seed: u64,
    pub format: Format,
}

fn dispatch(command: &Command, global: &Global) -> Result<(), Failure> {
    match command {
        Command::Eigen(a) => commands::eigen::run(a, global),
        Command::Evolve(a) => commands::evolve::run(a, global),
        Command::Relax(a) => commands::relax::run(a, global),
        Command::GaugeCheck(a) => commands::gauge::run(a, global),
        Command::Units(a) => commands::units::run(a, global),
        Command::RagDemo(a) => commands::rag::run(a, global),
        Command::Fixture(a) => commands::fixture::run(a, global),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { failure::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let global = Global { out: cli.out, seed: cli.seed, format: cli.format };
    match dispatch(&cli.command, &global) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json_line());
            ExitCode::from(f.code)
        }
    }
}
