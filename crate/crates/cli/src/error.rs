use fueterlab_core::Error as CoreError;
use thiserror::Error;

/// Failures of a command, split by the exit code they map to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("computation failed: {0}")]
    Compute(CoreError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<CoreError> for CliError {
    /// Parameters outside their domain are configuration errors; everything
    /// the numerics hit on valid input is computational.
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter(_)
            | CoreError::BadRadius(_)
            | CoreError::BadResolution(_)
            | CoreError::OutsideHalfSpace(_)
            | CoreError::BallTooLarge { .. } => CliError::Config(e.to_string()),
            other => CliError::Compute(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
