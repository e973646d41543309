use thiserror::Error;

/// Errors raised by toolkit operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("real-structure rules are not involutive: {0}")]
    NonInvolutive(String),
    #[error("reality condition violated: {0}")]
    Reality(String),
    #[error("equation is not weighted-homogeneous: {0}")]
    Weight(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("target is not on the fiber: {0}")]
    Fiber(String),
    #[error("the origin lies on both components and has no label")]
    Origin,
    #[error("inconsistent matrix-model data: {0}")]
    Model(String),
    #[error("group axiom `{axiom}` fails at element indices {witness:?}")]
    GroupAxiom { axiom: String, witness: Vec<usize> },
    #[error("model failed validation: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
