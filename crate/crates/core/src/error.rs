use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid dimension: {0}")]
    Dimension(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is numerically singular (smallest singular value {smallest:e} <= {tolerance:e})")]
    SingularMatrix { smallest: f64, tolerance: f64 },
    #[error("top singular value is not simple (first gap {gap})")]
    DegenerateGap { gap: f64 },
    #[error("cannot build a projective point from the zero vector")]
    ZeroVector,
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: f64 },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("log-singular evaluation: delta(x, y) = {delta:e} at atom {atom}")]
    SingularEvaluation { atom: usize, delta: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("triangular array row entry {entry} is not centered (mean {mean})")]
    NonCentered { entry: usize, mean: f64 },
    #[error("empty sample")]
    EmptySample,
    #[error("raw product of {steps} steps exceeds the limit of {limit}; use the renormalized walk")]
    RawProductLimit { steps: usize, limit: usize },
}
