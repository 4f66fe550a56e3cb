use thiserror::Error;

/// Errors raised by the jet engine and the Monte Carlo machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("jet iteration did not stabilise after {0} steps")]
    NoConvergence(usize),
    #[error("structure jet is not in normal form: {0}")]
    BrokenStructure(String),
    #[error("degenerate path: {0}")]
    DegeneratePath(String),
    #[error("trajectory left the guard ball (|u| = {norm:.3} > {radius})")]
    Escaped { norm: f64, radius: f64 },
    #[error("missing iterated integral {0}")]
    MissingIndex(String),
    #[error("singular system: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;
