use spinsep::Error;

/// Failures mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable input or output path.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// Malformed document or flag value.
    #[error("format error: {0}")]
    Format(String),
    /// Well-formed input that the operation cannot accept.
    #[error("{0}")]
    Semantic(String),
    /// Matrix that fails density validation.
    #[error("invalid density: {0}")]
    InvalidDensity(String),
}

impl CliError {
    pub fn semantic(e: Error) -> Self {
        CliError::Semantic(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Format(_) => 2,
            CliError::Semantic(_) => 3,
            CliError::InvalidDensity(_) => 4,
        }
    }
}
