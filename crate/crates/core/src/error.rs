use thiserror::Error;

use crate::freealg::Family;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("index {index} out of range 1..={bound} for {what}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("multi-index {0:?} must be strictly increasing")]
    NotIncreasing(Vec<usize>),

    #[error("multi-index {0:?} must be non-decreasing")]
    NotNonDecreasing(Vec<usize>),

    #[error("{0:?} is not a permutation")]
    NotAPermutation(Vec<usize>),

    #[error("multi-index {sub:?} is not contained in {ambient:?}")]
    NotContained { sub: Vec<usize>, ambient: Vec<usize> },

    #[error("multi-index {0:?} has repeated entries")]
    RepeatedEntries(Vec<usize>),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator is not idempotent: {0}")]
    NotIdempotent(&'static str),

    #[error("letter {0} is not in the declared alphabet")]
    ForeignLetter(String),

    #[error("family {0:?} is not declared in the alphabet")]
    UndeclaredFamily(Family),

    #[error("size guard exceeded: {words} words > limit {limit}")]
    GuardExceeded { words: usize, limit: usize },

    #[error("degenerate parameter assignment: {0}")]
    Degenerate(String),

    #[error("parameter constraint unsatisfiable: {0}")]
    ConstraintUnsatisfiable(String),

    #[error("mutation {mutation} is not applicable to {case}")]
    InapplicableMutation { mutation: String, case: String },

    #[error("normalizer vanishes in the field: {0}")]
    VanishingNormalizer(String),

    #[error("truncation degree {limit} too small: an operator raised degree to {reached}")]
    TruncationOverflow { limit: usize, reached: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported prime {0}")]
    UnsupportedPrime(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
