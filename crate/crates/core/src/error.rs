use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two shapes that must agree do not.
    DimensionMismatch { expected: usize, found: usize },
    /// A parameter or data value violates a documented precondition.
    InvalidInput(String),
    /// A quantile was requested outside the support of the distribution.
    Domain(String),
    /// A covariance matrix could not be factorized, even after jitter.
    NotPositiveDefinite,
    /// The conditioning block of a Gaussian is numerically singular.
    Conditioning,
    /// The output sample has zero (or non-positive) variance.
    DegenerateVariance,
    /// A combinatorial enumeration would exceed its guard.
    TooLarge { what: &'static str, limit: usize, found: usize },
    /// A replicated site carries fewer replicates than the estimator needs.
    InsufficientReplicates { site: usize, count: usize },
}

impl Error {
    /// `true` for failures caused by the numbers themselves rather than by
    /// malformed input: singular matrices, vanishing variance.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NotPositiveDefinite | Error::Conditioning | Error::DegenerateVariance)
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NotPositiveDefinite => f.write_str("covariance matrix is not positive definite"),
            Error::Conditioning => f.write_str("conditioning block is numerically singular"),
            Error::DegenerateVariance => f.write_str("degenerate model: output variance is zero"),
            Error::TooLarge { what, limit, found } => {
                write!(f, "{what} too large: {found} exceeds the limit of {limit}")
            }
            Error::InsufficientReplicates { site, count } => {
                write!(f, "site {site} has {count} replicate(s); at least 2 are required")
            }
        }
    }
}

impl core::error::Error for Error {}
