//! Command-line front end for `kraus-core`: JSON inputs, CSV time series,
//! dilation dumps and gate-count reports.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;

use std::io::Write;

use args::{Cli, Command};
use error::CliResult;

/// Runs a parsed command and returns its exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<u8> {
    match &cli.command {
        Command::Evolve(a) => commands::evolve(a, stdout),
        Command::Expect(a) => commands::expect(a, stdout),
        Command::Validate(a) => commands::validate(a, stdout),
        Command::Dilate(a) => commands::dilate_cmd(a, stdout),
        Command::Complexity(a) => commands::complexity(a, stdout),
    }
}
