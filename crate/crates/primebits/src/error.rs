use thiserror::Error;

/// The error type shared by all modules of this crate.
#[derive(Error, Debug)]
pub enum Error {
    /// A sieve request went past the configured limit.
    #[error("sieve capacity exceeded: needed {requested}, configured maximum {max}")]
    CapacityExceeded { requested: u64, max: u64 },

    /// A differencing operation was given too short a sequence.
    #[error("insufficient input: need at least {needed} elements, got {got}")]
    InsufficientInput { needed: usize, got: usize },

    /// A bit block must have a positive length divisible by 4.
    #[error("invalid block length {got}: must be a positive multiple of 4")]
    BlockLength { got: usize },

    /// Bit containers only accept the values 0 and 1.
    #[error("non-binary value {value} at index {index}")]
    NonBinaryValue { index: usize, value: u8 },

    /// Histogram bins must be at least one unit wide.
    #[error("bin width must be at least 1")]
    ZeroBinWidth,

    /// A group specification failed validation.
    #[error("invalid group spec: {reason}")]
    InvalidGroupSpec { reason: String },

    /// Groups can only be compared when their shapes agree.
    #[error("group shapes differ: {a_blocks}x{a_bits} bits vs {b_blocks}x{b_bits} bits")]
    GroupShapeMismatch {
        a_blocks: usize,
        a_bits: usize,
        b_blocks: usize,
        b_bits: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
