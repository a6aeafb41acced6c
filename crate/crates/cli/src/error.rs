use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unparseable input, unknown names, unreadable files. Exit 2.
    #[error("{0}")]
    Input(String),
    /// A cross-check failed. Exit 3, with a diagnostic dump on stderr.
    #[error("{message}")]
    Invariant {
        message: String,
        dump: Option<Value>,
    },
}

impl CliError {
    pub fn invariant(message: impl Into<String>, dump: Value) -> Self {
        CliError::Invariant {
            message: message.into(),
            dump: Some(dump),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Invariant { .. } => 3,
        }
    }
}

impl From<knotwidth::Error> for CliError {
    fn from(e: knotwidth::Error) -> Self {
        match e {
            knotwidth::Error::Invariant(message) => CliError::Invariant {
                message,
                dump: None,
            },
            other => CliError::Input(other.to_string()),
        }
    }
}
