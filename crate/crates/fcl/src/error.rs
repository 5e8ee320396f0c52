use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum FclError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("refused: {0}")]
    Resource(String),
    #[error("oracle check failed: {0}")]
    OracleFailure(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("bad snapshot: {0}")]
    Snapshot(String),
}

impl FclError {
    /// Process exit status for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Resource(_) => 3,
            Self::OracleFailure(_) => 4,
            Self::Io { .. } | Self::Snapshot(_) => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }
}

impl From<fcl_core::Error> for FclError {
    fn from(e: fcl_core::Error) -> Self {
        match e {
            fcl_core::Error::ResourceLimit(msg) => Self::Resource(msg),
            other => Self::Config(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for FclError {
    fn from(e: serde_json::Error) -> Self {
        Self::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, FclError>;
