use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("homotope level mismatch: {0}")]
    LevelMismatch(String),
    #[error("hypotheses not satisfied: {0}")]
    Hypotheses(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
