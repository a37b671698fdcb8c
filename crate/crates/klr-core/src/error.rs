use thiserror::Error;

#[derive(Debug, Error)]
pub enum KlrError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("strand count mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("element spans several blocks")]
    MixedBlocks,
    #[error("verification failed: {0}")]
    Mismatch(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, KlrError>;
