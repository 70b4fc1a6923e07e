use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero is not allowed here")]
    ZeroInput,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not an odd prime")]
    NotOddPrime(String),
    #[error("could not factor {0} within the configured budget")]
    FactorizationBudget(String),
    #[error("quadratic form is degenerate")]
    Degenerate,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("signature mismatch: expected {expected:?}, got {got:?}")]
    Signature {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("matrix is not in GL_n(Z)")]
    NotUnimodular,
    #[error("group exceeds the size bound {0}")]
    GroupTooLarge(usize),
    #[error("element {0} has a fixed point; the quotient is an orbifold")]
    NotFree(String),
    #[error("representation is inconsistent with the group relations")]
    InconsistentRepresentation,
    #[error("no double cover with the requested orientability")]
    NoSuchCover,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("deciders disagree on {0}")]
    DeciderDisagreement(String),
    #[error("check failed: {0}")]
    Assertion(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
