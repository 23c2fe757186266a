use thiserror::Error;

/// Errors raised across the library. Variants mirror the failure modes of
/// the solving pipeline so callers can map them onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("coefficient error: {0}")]
    Coefficient(String),
    #[error("field error: {0}")]
    Field(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("ideal is not zero-dimensional")]
    NotFinite,
    #[error("ideal is not radical")]
    NotRadical,
    #[error("linear form does not separate the points")]
    NotSeparating,
    #[error("empty fiber: the system has no solutions")]
    EmptyFiber,
    #[error("probabilistic routine failed: {0}")]
    Fail(String),
    #[error("unstable result: {0}")]
    Unstable(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
