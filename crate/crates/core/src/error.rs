use core::fmt;

use crate::Class;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// One of the two classes has no instances.
    MissingClass(Class),
    NonFiniteScore {
        index: usize,
    },
    InvalidCost(&'static str),
    RankOutOfRange {
        rank: usize,
        len: usize,
    },
    EmptyTestSet,
    /// An argument lies outside the domain of a formula, e.g. x outside (0, 1).
    Domain(&'static str),
    InvalidContext(&'static str),
    /// The Bernstein deviation is zero; the cost is deterministic given the counts.
    ZeroSigma,
    /// No admissible value reaches the requested confidence or ratio.
    Unachievable(&'static str),
    InvalidArgument(&'static str),
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    NotProbabilityScorer,
    /// Rejection sampling removed every instance of a class, even after retries.
    EmptyResample,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MissingClass(c) => write!(f, "no instances of class {}", c.bit()),
            Error::NonFiniteScore { index } => write!(f, "score at index {index} is not finite"),
            Error::InvalidCost(msg) => write!(f, "invalid cost matrix: {msg}"),
            Error::RankOutOfRange { rank, len } => {
                write!(f, "rank {rank} outside 1..={len}")
            }
            Error::EmptyTestSet => f.write_str("test set is empty"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::InvalidContext(msg) => write!(f, "invalid bound context: {msg}"),
            Error::ZeroSigma => f.write_str("bernstein sigma is zero"),
            Error::Unachievable(msg) => write!(f, "unachievable: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} features, found {found}")
            }
            Error::NotProbabilityScorer => {
                f.write_str("theoretical threshold requires probability scores")
            }
            Error::EmptyResample => f.write_str("rejection sampling left a class empty"),
        }
    }
}

impl core::error::Error for Error {}
