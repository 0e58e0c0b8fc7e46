use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("algebra mismatch: expected dimension {expected}, found {found}")]
    AlgebraMismatch { expected: usize, found: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("constant term must vanish: {0}")]
    NonzeroConstantTerm(String),

    #[error("constant term not invertible: {0}")]
    NotInGinv(String),

    #[error("size guard: n = {n} exceeds limit {limit}")]
    SizeGuard { n: usize, limit: usize },

    #[error("invalid structure constants: {0}")]
    InvalidAlgebra(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
