//! Harness errors, split by the exit code they map to.
//!
//! Configuration problems (bad flags, impossible scenario parameters,
//! unparseable inputs) exit with code 2; anything that goes wrong while a
//! valid run is executing exits with code 1.

use std::fmt;

#[derive(Debug)]
pub enum BenchError {
    /// Invalid configuration or malformed input files. Exit code 2.
    Config(String),
    /// Failure during an otherwise valid run. Exit code 1.
    Runtime(String),
}

impl BenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 2,
            BenchError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::Config(msg) => write!(f, "config error: {msg}"),
            BenchError::Runtime(msg) => write!(f, "runtime error: {msg}"),
        }
    }
}

impl std::error::Error for BenchError {}

impl From<evokit::Error> for BenchError {
    fn from(e: evokit::Error) -> Self {
        match e {
            // Engine-side configuration and contract violations mean the
            // requested run was never valid.
            evokit::Error::Config(_)
            | evokit::Error::Contract(_)
            | evokit::Error::Range(_)
            | evokit::Error::Validation(_) => BenchError::Config(e.to_string()),
            other => BenchError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for BenchError {
    fn from(e: std::io::Error) -> Self {
        BenchError::Runtime(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
