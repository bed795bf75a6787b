use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("inhomogeneous input: terms have degrees {degrees:?}")]
    Inhomogeneous { degrees: Vec<u32> },

    #[error("variable x{index} at byte {position} is outside x1..x{nvars}")]
    UnknownVariable {
        index: u64,
        nvars: usize,
        position: usize,
    },

    #[error("number of variables must be positive")]
    NoVariables,

    #[error("forms live in different rings: {left} vs {right} variables")]
    NvarsMismatch { left: usize, right: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },

    #[error("exponent vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation undefined for the zero form")]
    ZeroForm,

    #[error("term budget exceeded: operation may produce {required} terms, limit is {limit}")]
    TermBudget { limit: usize, required: u128 },

    #[error("point set of size {size} exceeds the face enumeration limit {limit}; use simplex_faces for full dilated simplices")]
    EnumerationBudget { size: usize, limit: usize },

    #[error("subset is not contained in the ambient point set")]
    NotASubset,

    #[error("face is empty")]
    EmptyFace,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
