use thiserror::Error;

/// Errors raised by the engine.
///
/// `Inconclusive` is kept apart from every other variant: it signals that a
/// truncated computation ran out of window or length, never that a
/// mathematical statement is false.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("inhomogeneous: {0}")]
    Inhomogeneous(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("degree {degree} lies outside the admissible window [{lo}, {hi}]")]
    WindowExceeded { degree: i64, lo: i64, hi: i64 },

    #[error("ring is not declared graded-local")]
    NotGradedLocal,

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("complex is not minimal: {0}")]
    NotMinimal(String),

    #[error("{0} is not invertible in the ground ring")]
    NotInvertible(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

impl Error {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Inconclusive(_) | Error::WindowExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
