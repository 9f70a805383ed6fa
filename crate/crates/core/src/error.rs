use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tableau mismatch: {left} vs {right}")]
    TableauMismatch { left: String, right: String },

    #[error("symbol {layer}.{position} is not part of tableau {tableau}")]
    SymbolOutOfRange {
        layer: usize,
        position: usize,
        tableau: String,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// The requested complex is larger than the configured enumeration budget.
    #[error("h = {h} exceeds the enumeration budget of {budget}")]
    BudgetExceeded { h: usize, budget: usize },

    #[error(
        "coefficients {coefficients} need a constant orientation system, \
         which only holds for m <= 1 (got m = {m}); use F2 instead"
    )]
    UnsupportedOrientation { m: usize, coefficients: String },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("degree {degree} is outside 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("cochain is not a cocycle")]
    NotACocycle,

    #[error("{0}")]
    InvalidArgument(String),

    /// A structural invariant of the complex failed; this is a bug.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
