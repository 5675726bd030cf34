use thiserror::Error;

use crate::poly::LinearChange;
use crate::lambda::OnePs;

/// A 1-PS together with the coordinate frame in which it acts diagonally.
///
/// `frame` maps the original coordinates to the certified ones: the form
/// `F∘frame` is the one whose monomials are weighed by `lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedOnePs {
    pub frame: LinearChange,
    pub lambda: OnePs,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable index {index} out of range for {n_vars} variables")]
    IndexOutOfRange { index: usize, n_vars: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("invalid one-parameter subgroup: {0}")]
    InvalidOnePs(String),

    #[error("one-parameter subgroup weights must be sorted ascending")]
    NotSorted,

    #[error("invalid substitution: {0}")]
    InvalidChange(String),

    #[error("gradient point has rank {rank} < {n_vars}; form is destabilized by {certificate:?}")]
    DegenerateGradient {
        rank: usize,
        n_vars: usize,
        certificate: Box<FramedOnePs>,
    },

    #[error("generators do not form a regular sequence")]
    NotRegular,

    #[error("expected {expected} generators, found {found}")]
    WrongGeneratorCount { expected: usize, found: usize },

    #[error("ideal piece has {0} missing monomials in the socle degree, expected exactly one")]
    MultipleMissing(usize),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("minor enumeration needs {needed} subsets, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("weight does not fit in a 64-bit integer")]
    Overflow,

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
