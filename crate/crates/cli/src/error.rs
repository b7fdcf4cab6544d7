use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] biphoton::Error),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    /// 2 for anything the user can fix in the configuration, 3 for numerical-domain failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Model(biphoton::Error::Config(_)) => 2,
            CliError::Model(_) => 3,
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
