//! `qpf`: DC power flow solved classically and with a simulated HHL circuit.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numerical failure,
//! 3 post-selection failure. Errors are reported as one line on stderr.

mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // Fold clap's multi-line report (minus the usage hint) into one line.
            let rendered = e.to_string();
            let reason: Vec<&str> = rendered
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!(
                "qpf: error: usage: {}",
                reason.join(" ").trim_start_matches("error: ")
            );
            return ExitCode::from(1);
        }
    };
    if cli.verbose {
        eprintln!("qpf {}", env!("CARGO_PKG_VERSION"));
    }
    match commands::run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qpf: error: {}", f.line());
            ExitCode::from(f.exit_code())
        }
    }
}
