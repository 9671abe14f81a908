//! Command-line front end for the `qthreshold` experiments.
//!
//! [`run`] is the whole program: it merges an optional key=value config file
//! into the arguments, dispatches the subcommand on a worker pool of the
//! requested size and maps every failure onto an exit status.

pub mod args;
pub mod codespec;
pub mod commands;
pub mod configfile;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::io;

use clap::Parser;
use thiserror::Error;

pub use args::Cli;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qthreshold::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
    /// At least one checked inequality failed; the report has already been
    /// written.
    #[error("{0} violation(s) found")]
    Violation(usize),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(qthreshold::Error::Resource { .. }) => EXIT_RESOURCE,
            CliError::Core(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_RESOURCE,
            CliError::Violation(_) => EXIT_VIOLATION,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Parses `argv` (program name first), runs the command and returns the exit
/// status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match configfile::merge_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("qthreshold: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match commands::dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("qthreshold: {e}");
            e.exit_code()
        }
    }
}
