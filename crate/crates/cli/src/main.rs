mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, ExperimentCommand};
use commands::{Context, Failure, Outcome};

/// Caps the rayon pool at `NOD_THREADS` when set.
fn configure_threads() -> Outcome {
    let Ok(value) = std::env::var("NOD_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("NOD_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: &Cli) -> Outcome {
    configure_threads()?;
    let ctx = Context { quiet: cli.quiet };
    match &cli.command {
        Command::Decompose(args) => commands::decompose(args),
        Command::Stats(args) => commands::stats(args),
        Command::Mdl(args) => commands::mdl(args, &ctx),
        Command::Compare(args) => commands::compare(args),
        Command::Sample(args) => commands::sample(args),
        Command::Experiment(ExperimentCommand::Dispersal(args)) => commands::dispersal(args, &ctx),
        Command::Experiment(ExperimentCommand::DivergenceGrid(args)) => {
            commands::divergence_grid(args)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            if let Failure::Usage(_) = failure {
                eprintln!("run 'nod --help' for usage");
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
