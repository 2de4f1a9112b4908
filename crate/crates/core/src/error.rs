use thiserror::Error;

/// Errors raised by the library.
///
/// Inconclusive outcomes (factoring budget exhausted, unknown orbit status)
/// are ordinary values, never errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("the valuation of zero is infinite")]
    ZeroValuation,
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("degenerate quadratic extension: {0}")]
    DegenerateExtension(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid generator set: {0}")]
    InvalidSet(String),
    #[error("invalid coding: {0}")]
    InvalidCoding(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("prime {0} is excluded: it divides a denominator")]
    ExcludedPrime(u64),
    #[error("internal consistency violation: {0}")]
    Consistency(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
