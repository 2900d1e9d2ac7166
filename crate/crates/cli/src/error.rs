use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag combinations.
    #[error("{0}")]
    Usage(String),
    /// Input files that are missing, unreadable or invalid, and failed runs.
    #[error("{0}")]
    Data(String),
    /// The attack would exceed its budget; carries the cost estimate.
    #[error("{message}")]
    Budget { message: String, estimate: Value },
}

impl CliError {
    pub fn data(e: impl std::fmt::Display) -> Self {
        CliError::Data(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Budget { .. } => 4,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Usage(m) => json!({ "error": m, "kind": "usage" }),
            CliError::Data(m) => json!({ "error": m, "kind": "data" }),
            CliError::Budget { message, estimate } => {
                json!({ "error": message, "kind": "budget", "estimate": estimate })
            }
        }
    }
}
