use thiserror::Error;

/// Errors raised by the star-moment library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A word contained a character other than `1`, `*` or `s` (1-based position).
    #[error("invalid character {found:?} at position {position}")]
    InvalidCharacter { position: usize, found: char },

    #[error("index {index} out of range for word of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("{what} exceeds the enumeration cap ({value} > {cap})")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },

    #[error("partition is not a pair partition")]
    NotPairPartition,

    #[error("partition is not alternating with respect to the word")]
    NotAlternating,

    #[error("pair ({outer}, {inner}) is not a bad pair of the partition")]
    PairNotBad { outer: usize, inner: usize },

    #[error("ground sizes differ ({left} vs {right})")]
    GroundSizeMismatch { left: usize, right: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("path is not a closed walk for the word")]
    NotAClosedPath,

    #[error("generator index {index} outside 1..={degree}")]
    GeneratorOutOfRange { index: usize, degree: usize },

    #[error("degree {0} outside the supported range 1..=64")]
    DegreeOutOfRange(usize),

    #[error("graph is not {0}-regular")]
    NotRegular(usize),

    #[error("raw cycle sum {raw} for length {length} is not divisible by {divisor}")]
    NormalizationFailure {
        length: usize,
        raw: u128,
        divisor: u128,
    },

    #[error("no simple sample after {0} attempts")]
    AttemptsExhausted(usize),

    #[error("no simple {d}-regular digraph on {n} vertices (need n > d)")]
    InfeasibleParameters { n: usize, d: usize },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph file line {line}: {message}")]
    GraphFormat { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &'static str, value: u128, cap: u128) -> Result<()> {
    if value > cap {
        Err(Error::CapExceeded { what, value, cap })
    } else {
        Ok(())
    }
}
