use thiserror::Error;

/// Exit status for a passing run.
pub const EXIT_OK: u8 = 0;
/// A verification suite ran and found a failing clause.
pub const EXIT_FAILED: u8 = 1;
/// The computation itself could not be completed.
pub const EXIT_COMPUTE: u8 = 2;
/// Bad flags, config or input values.
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] fibnest_core::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_COMPUTE,
        }
    }
}
