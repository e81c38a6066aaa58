use serde_json::{json, Value};
use thiserror::Error;

/// Exit 1: the command could not run as asked. Exit 2: it ran, and the
/// algorithm failed or the artifact did not verify.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{message}")]
    Failure { message: String, details: Value },
    #[error("{message}")]
    Invalid { message: String, details: Value },
}

impl CliError {
    pub fn usage(msg: impl std::fmt::Display) -> Self {
        CliError::Usage(msg.to_string())
    }

    pub fn input(err: impl std::fmt::Display) -> Self {
        CliError::Input(err.to_string())
    }

    pub fn failure(err: impl std::fmt::Display, details: Value) -> Self {
        CliError::Failure {
            message: err.to_string(),
            details,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 1,
            CliError::Failure { .. } | CliError::Invalid { .. } => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
            CliError::Failure { .. } => "failure",
            CliError::Invalid { .. } => "invalid",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut doc = json!({
            "error": true,
            "kind": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        if let CliError::Failure { details, .. } | CliError::Invalid { details, .. } = self {
            doc["details"] = details.clone();
        }
        doc
    }
}
