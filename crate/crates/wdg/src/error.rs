use std::fmt;

use serde_json::json;

/// Errors of the std layer, each mapped to a process exit code.
#[derive(Debug)]
pub enum CliError {
    /// bad flags or arguments (exit 2)
    Usage(String),
    /// unreadable or malformed input files (exit 2)
    Format(String),
    Io(std::io::Error),
    /// errors raised by the core library
    Core(wdg_core::Error),
    /// an invariant check found a counterexample (exit 1)
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) | CliError::Core(wdg_core::Error::Internal(_)) => 1,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Format(_) => "format",
            CliError::Io(_) => "io",
            CliError::Core(wdg_core::Error::Internal(_)) => "invariant",
            CliError::Core(_) => "input",
            CliError::Violation(_) => "violation",
        }
    }

    /// The structured form written to stderr.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema": crate::formats::SCHEMA,
            "error": { "kind": self.kind(), "message": self.to_string() },
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Format(m) | CliError::Violation(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<wdg_core::Error> for CliError {
    fn from(e: wdg_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Format(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
