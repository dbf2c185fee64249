use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// The weighted sum of a generated sequence leaves no modulus inside the
    /// admissible bit range; the caller regenerates the sequence.
    #[error("sequence too large: weighted sum needs {bits} bits, limit is {limit}")]
    SequenceTooLarge { bits: u64, limit: u64 },

    /// A public element reduced to zero; the caller resamples W, delta or the lever.
    #[error("degenerate public element at position {index}")]
    DegeneratePublicElement { index: usize },

    #[error("sequence is not extra superincreasing (first violation at position {index})")]
    NotExtraSuperincreasing { index: usize },

    #[error("all-zero block")]
    ZeroBlock,

    #[error("ciphertext out of range")]
    CiphertextOutOfRange,

    #[error("invalid ciphertext")]
    InvalidCiphertext,

    #[error("invalid ciphertext in block {index}")]
    InvalidBlock { index: usize },

    #[error("framing error: {0}")]
    Framing(String),

    #[error("decode error: {0}")]
    Decode(String),

    #[error("basis is rank deficient")]
    RankDeficient,

    #[error("search bound exceeded: {0}")]
    BoundExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
