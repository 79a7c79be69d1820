//! Error carrier that pins the process exit code.
//!
//! The contract is stable for scripting: 0 success, 1 validation failure
//! (bad flag, bad config, bad data values), 2 I/O failure (missing or
//! unreadable file, failed write).

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "error: {msg}"),
            CliError::Io(msg) => write!(f, "I/O error: {msg}"),
        }
    }
}

impl From<sunfleet::Error> for CliError {
    fn from(err: sunfleet::Error) -> Self {
        match err {
            sunfleet::Error::Io(e) => CliError::Io(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// Wrap a filesystem error with the path it concerns.
pub fn io_at(path: &std::path::Path, err: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {err}", path.display()))
}
