use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field degree m={0} (supported: 1..=10)")]
    UnsupportedDegree(u32),

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("code construction failed: {0}")]
    Construction(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("observations of one symbol mix erasure-channel and AWGN values")]
    MixedObservations,

    #[error("malformed code file at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("code file checksum mismatch: stored 0x{stored:08x}, computed 0x{computed:08x}")]
    Checksum { stored: u32, computed: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
