use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or invalid input, with the offending field.
    #[error("{field}: {message}")]
    Input { field: String, message: String },
    #[error("{0}")]
    Core(#[from] torifan_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn input(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Input {
            field: field.into(),
            message: message.into(),
        }
    }

    /// 1 bad input, 2 budget exceeded, 3 broken invariant.
    pub fn exit_code(&self) -> i32 {
        use torifan_core::Error as E;
        match self {
            CliError::Core(E::BudgetExceeded { .. }) => 2,
            CliError::Core(E::Invariant(_)) | CliError::Core(E::InvalidCertificate(_)) => 3,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
