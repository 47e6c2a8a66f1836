use thiserror::Error;

use crate::norms::ModularValue;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid Orlicz function: {0}")]
    InvalidFunction(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("operator is not positive semidefinite: {0}")]
    NotPositive(String),

    /// The tail bound never dropped below the requested tolerance within the term cap.
    #[error("modular truncation failed after {} terms (tail bound {:e})", partial.terms_used, partial.tail_bound)]
    Truncation { partial: ModularValue },

    /// The modular is certified infinite: the lower tail bound diverges.
    #[error("modular diverges (certified after {terms_used} terms)")]
    Divergent { terms_used: usize },

    #[error("operator is not in the Orlicz class: {0}")]
    NotInClass(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),
}
