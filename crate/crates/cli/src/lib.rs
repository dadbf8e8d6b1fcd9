//! `onsager` command-line front end: reads a model config, runs verification
//! suites in parallel and writes JSON-lines reports or spectrum CSVs.
//!
//! Exit codes: 0 every report passed, 1 some report failed (or a numerical
//! error interrupted a check), 2 unknown model kind, 3 bad config or
//! arguments, 4 dense-size cap exceeded.

use std::ffi::OsString;
use std::fmt;

use clap::Parser;

pub mod commands;
pub mod config;
pub mod output;

pub use commands::Cli;

#[derive(Debug)]
pub enum CliError {
    UnknownKind(String),
    Config(String),
    Core(onsager_core::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::UnknownKind(k) => write!(f, "unknown model kind `{k}`"),
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<onsager_core::Error> for CliError {
    fn from(e: onsager_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_UNKNOWN_KIND: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_CAP: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use onsager_core::Error as E;
        match self {
            CliError::UnknownKind(_) => EXIT_UNKNOWN_KIND,
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Core(E::CapExceeded { .. }) => EXIT_CAP,
            CliError::Core(E::Configuration(_) | E::InvalidArgument(_) | E::Unsupported(_) | E::IndexOutOfRange { .. }) => {
                EXIT_CONFIG
            }
            CliError::Core(_) => EXIT_FAILED,
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match commands::execute(&cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("onsager: {e}");
            e.exit_code()
        }
    }
}
