use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    /// The chiral vector passes through the origin; the winding number is undefined.
    #[error("degenerate topology: {0}")]
    DegenerateTopology(String),
    #[error("singular mode at k = {k}: quasienergy gap is closed")]
    SingularMode { k: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
