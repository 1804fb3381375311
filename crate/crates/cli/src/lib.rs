//! Library behind the `preserver-lab` binary: argument types, dispatch to
//! `preserver-core`, and JSON report emission.

pub mod args;
mod commands;
pub mod report;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;
use preserver_core::Error;

pub use args::Cli;
pub use report::{Report, Status, Timing};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A falsified preserver, a counterexample or a failed inequality.
    pub const VIOLATION: i32 = 1;
    /// Unparseable or invalid arguments.
    pub const USAGE: i32 = 2;
    /// A numerical routine failed on valid input.
    pub const FAILURE: i32 = 3;
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: exit::USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NumericalFailure(_) => exit::FAILURE,
            _ => exit::USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Runs one parsed command.
pub fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut report = commands::run(&cli.command, cli.seed)?;
    report.timing = Timing { elapsed_seconds: start.elapsed().as_secs_f64() };
    Ok(report)
}

/// Parses, dispatches and writes the report. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    let report = match dispatch(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.code;
        }
    };
    let json = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return exit::USAGE;
            }
        }
        None => print!("{json}"),
    }
    match report.status {
        Status::Ok => exit::OK,
        Status::Violation => exit::VIOLATION,
    }
}
