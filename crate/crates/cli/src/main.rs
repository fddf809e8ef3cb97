use std::process::ExitCode;

use clap::Parser;

mod args;
mod run;
mod table;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Dispersion(a) => run::dispersion(a),
        Command::Velocities(a) => run::velocities(a),
        Command::StepResponse(a) => run::step_response(a),
        Command::Invert(a) => run::invert(a),
        Command::Validate(c) => run::validate(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("memwave: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
