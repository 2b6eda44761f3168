use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible fields: sqrt({0}) and sqrt({1})")]
    IncompatibleFields(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative radicand")]
    NegativeRadicand,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty continued fraction")]
    EmptyExpansion,
    #[error("continued fraction entries must be >= 1")]
    ZeroEntry,
    #[error("entry too large for a machine integer")]
    Overflow,
    #[error("unbounded: {0}")]
    Unbounded(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("not connected")]
    NotConnected,
    #[error("permutation size mismatch")]
    SizeMismatch,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("no saddle connections")]
    NoSaddleConnections,
    #[error("seed is not primitive")]
    NotPrimitive,
    #[error("convention mismatch: orbit sizes {0:?}")]
    ConventionMismatch(Vec<usize>),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("not an even loop")]
    NotEvenLoop,
    #[error("rational slope has no Lagrange value")]
    Rational,
    #[error("hypothesis M_S^2-2 < L(T^2,alpha) not verified")]
    Hypothesis,
    #[error("not in Xi: word has no letter a")]
    NotInXi,
    #[error("word has an unbounded run of a")]
    UnboundedRun,
    #[error("no closed form for this limit word")]
    NoClosedForm,
    #[error("no realizing vertex found for the word")]
    NoRealizingVertex,
    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
