use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("level {level} out of range for a length-2^{max} signal")]
    LevelOutOfRange { level: u32, max: u32 },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two stretched nodes coincide modulo `2^j`.
    #[error("degenerate Vandermonde nodes: {0}")]
    Degenerate(String),

    /// Householder QR found `min |R_kk| / max |R_kk|` below the rank tolerance.
    #[error("ill-conditioned restricted system (diagonal ratio {ratio:e})")]
    IllConditioned { ratio: f64 },

    #[error("internal error: {0}")]
    Internal(String),
}
