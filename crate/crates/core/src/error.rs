//! Error type shared by every module in the crate.

/// Errors raised by exact-arithmetic operations and table builders.
///
/// Arithmetic never wraps: any result that would leave the 128-bit range
/// surfaces as [`Error::Overflow`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("arithmetic underflow in {0}")]
    Underflow(&'static str),

    #[error("division by zero")]
    DivisionByZero,

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("{0} is not prime")]
    NotPrime(u128),

    /// Input exceeds a documented operating limit (e.g. primality and
    /// factorization stop at 2^64 - 1).
    #[error("{what}: {value} exceeds the supported maximum {max}")]
    OutOfRange {
        what: &'static str,
        value: u128,
        max: u128,
    },

    /// A table build would exceed the configured sieve cap.
    #[error("sieve limit {requested} exceeds cap of {cap} entries")]
    SieveCap { requested: u128, cap: u64 },

    #[error("invalid number {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("cache file line {line}: {reason}")]
    MalformedCache { line: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
