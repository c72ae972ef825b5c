mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::config::{Cli, Command};
use crate::error::CliError;

const THREADS_VAR: &str = "EULER_STAB_THREADS";

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Invalid(format!("{THREADS_VAR} must be a nonnegative integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("{THREADS_VAR}: {e}")))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    init_threads()?;
    match &cli.command {
        Command::Classify(a) => commands::classify(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Lattice(a) => commands::lattice(a),
        Command::Simulate(a) => commands::simulate_cmd(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("euler-stab: {e}");
            e.exit_code()
        }
    }
}
