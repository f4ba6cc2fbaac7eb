//! JSON report envelope shared by every command.

use serde::Serialize;

use crate::config::RunConfig;
use crate::RunError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub status: Status,
    pub pass: bool,
    /// Left-hand side of the checked identity, usually a Morse index difference.
    pub lhs: Option<i64>,
    /// Right-hand side, usually a Maslov index or spectral flow.
    pub rhs: Option<i64>,
    pub result: Option<serde_json::Value>,
    pub error: Option<ErrorInfo>,
    /// Effective configuration after inline overrides.
    pub config: RunConfig,
}

impl Report {
    pub fn failure(command: &str, config: RunConfig, err: &RunError) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            status: Status::Error,
            pass: false,
            lhs: None,
            rhs: None,
            result: None,
            error: Some(ErrorInfo { kind: err.kind().to_string(), message: err.to_string() }),
            config,
        }
    }
}
