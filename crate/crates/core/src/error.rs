use thiserror::Error;

use crate::scalar::Field;

/// Errors raised by the algebraic layers (everything except parsing).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("{0} is not a prime below 2^31")]
    BadModulus(u32),
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertibleModP { value: String, modulus: u32 },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` has weight 0; generators must have positive degree")]
    ZeroWeight(String),
    #[error("letter {0} is not a generator of this algebra")]
    UnknownLetter(usize),
    #[error("relation {0} is zero")]
    ZeroRelation(usize),
    #[error("relation {0} is not homogeneous")]
    InhomogeneousRelation(usize),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("degree {requested} exceeds the truncation degree {limit}")]
    TruncationExceeded { requested: u32, limit: u32 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("values on generators do not determine the extension: {0}")]
    Underdetermined(String),
    #[error("internal self-test failed: {0}")]
    SelfTest(String),
}

/// A located error in a `.galg` document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    /// Byte offset into the source text.
    pub offset: usize,
    pub message: String,
}

/// Umbrella error for callers that drive both parsing and computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
