use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use kraus_sim::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match kraus_sim::run(&cli, &mut lock) {
        Ok(code) => {
            let _ = lock.flush();
            ExitCode::from(code)
        }
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
