use std::io;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] jengan_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed WAV header: {0}")]
    MalformedWav(String),
    #[error("unsupported WAV encoding: {0}")]
    UnsupportedWav(String),
    #[error("malformed checkpoint: {0}")]
    Checkpoint(String),
    #[error("config {path}: {source}")]
    ConfigFile { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
    #[error("data pipeline stopped: {0}")]
    Pipeline(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    /// Process exit code: 2 for bad invocations and inputs that violate a
    /// precondition, 1 for everything that failed while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::ConfigFile { .. } => 2,
            Error::Core(
                jengan_core::Error::InvalidShift { .. }
                | jengan_core::Error::InvalidRatio { .. }
                | jengan_core::Error::Config(_),
            ) => 2,
            _ => 1,
        }
    }
}
