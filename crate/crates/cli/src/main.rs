//! `eprb`: correlation curves, pair rates, and Bell-inequality analysis
//! for probabilistic-detection local hidden variable models.
//!
//! Exit codes: 0 ok, 2 usage, 3 degenerate rate, 4 zero coincidences,
//! 5 verification failure.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => commands::sweep(args),
        Command::Bell(args) => commands::bell(args),
        Command::Verify(args) => commands::verify(args),
        Command::Stats(args) => commands::stats(args),
        Command::Tradeoff(args) => commands::tradeoff(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("eprb: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
