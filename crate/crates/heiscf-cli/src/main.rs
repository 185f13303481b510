//! `heiscf` — continued fractions on the Heisenberg group.
//!
//! Exit codes: 0 success; 2 parse/validation error; 3 numeric-certification
//! failure; 4 internal invariant violation.

mod args;
mod commands;
mod digitfile;
mod errors;
mod manifest;
mod points;

use args::{Cli, Command};
use clap::Parser;

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Expand(a) => commands::cmd_expand(a),
        Command::Reconstruct(a) => commands::cmd_reconstruct(a),
        Command::Verify(a) => commands::cmd_verify(a),
        Command::Pringsheim(a) => commands::cmd_pringsheim(a),
        Command::Orbit(a) => commands::cmd_orbit(a),
        Command::Measure(a) => commands::cmd_measure(a),
        Command::Stats(a) => commands::cmd_stats(a),
        Command::Cylinder(a) => commands::cmd_cylinder(a),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
