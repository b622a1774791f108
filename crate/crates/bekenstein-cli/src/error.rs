use std::path::PathBuf;

/// Failures of the front end. Property violations are not errors: they are
/// failed records.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot read config {path}: {source}")]
    ConfigFile {
        path: PathBuf,
        #[source]
        source: ini::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Core(#[from] bekenstein_core::Error),
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::ConfigFile { .. } => crate::EXIT_USAGE,
            CliError::Core(e) if e.is_numerical() => crate::EXIT_NUMERICAL,
            CliError::Core(bekenstein_core::Error::Config(_) | bekenstein_core::Error::Input(_)) => crate::EXIT_USAGE,
            _ => crate::EXIT_NUMERICAL,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
