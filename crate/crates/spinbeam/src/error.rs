use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("unknown leg `{0}`")]
    UnknownLeg(String),

    #[error("site {site} out of range for a {count}-site network")]
    SiteOutOfRange { site: usize, count: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("eigendecomposition failed: {0}")]
    Linalg(String),
}

pub type Result<T> = std::result::Result<T, Error>;
