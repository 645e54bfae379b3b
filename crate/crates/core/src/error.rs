use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is neither 0 nor a prime at most 2^31")]
    InvalidCharacteristic(u64),

    #[error("mixed characteristics: expected {expected}, found {found}")]
    MixedCharacteristic { expected: u64, found: u64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid conductance vector: {0}")]
    InvalidConductances(String),

    #[error("operation requires a {expected} germ algebra")]
    KindMismatch { expected: &'static str },

    #[error("ambient algebras differ")]
    AmbientMismatch,

    #[error("subspace is not a unital subalgebra: {0}")]
    NotSubalgebra(String),

    #[error("subalgebra closure did not stabilize within {0} iterations")]
    ClosureDidNotStabilize(usize),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid set partition: {0}")]
    InvalidPartition(String),

    #[error("partition exponents out of range: {0}")]
    ExponentOutOfRange(String),

    #[error("territory data inconsistent: {0}")]
    TerritoryMismatch(String),

    #[error("enumeration needs {candidates} candidates, exceeding the work bound {bound}")]
    WorkBoundExceeded { candidates: u128, bound: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("degree cut {cut} is below the largest exponent {needed}")]
    DegreeCutTooSmall { cut: usize, needed: usize },

    #[error("truncation {given} at gluing branch {branch} cannot separate a root of multiplicity {needed}; raise the truncation")]
    TruncationTooSmall {
        branch: usize,
        needed: usize,
        given: usize,
    },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid pencil: {0}")]
    InvalidPencil(String),

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed document: {0}")]
    Wire(String),
}
