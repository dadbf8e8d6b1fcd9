use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid configuration: {0}")]
    Configuration(String),
    #[error("dimension {dim} exceeds the dense cap {cap}")]
    CapExceeded { dim: usize, cap: usize },
    #[error("matrix is not Hermitian (relative deviation {0:.3e})")]
    NonHermitian(f64),
    #[error("matrix is numerically singular (condition estimate {0:.3e})")]
    Singular(f64),
    #[error("spectral parameter sits on a pole: {0}")]
    Pole(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
