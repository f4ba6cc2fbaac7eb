//! Command line driver: parses a run configuration, executes one command
//! against `maslov_core` and writes a JSON report with optional CSV data.

pub mod args;
pub mod config;
pub mod io;
pub mod report;
pub mod run;

use thiserror::Error;

pub use run::run;

/// Exit codes of the `maslov` binary.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const IDENTITY_FAILED: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] maslov_core::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Core(e) if e.is_numerical() => exit::NUMERICAL,
            _ => exit::CONFIG,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Config(_) => "config",
            RunError::Io(_) => "io",
            RunError::Core(e) => e.kind(),
        }
    }
}
