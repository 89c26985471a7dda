use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field characteristic {0}: {1}")]
    InvalidField(u64, &'static str),
    #[error("characteristic mismatch: {0} vs {1}")]
    FieldMismatch(u64, u64),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("exact division failed: {0}")]
    NotDivisible(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("Groebner computation exceeded degree cap {0}")]
    DegreeCapExceeded(u32),
    #[error("ideal is not zero-dimensional (projective dimension {0})")]
    NotZeroDimensional(i64),
    #[error("randomized routine failed after {0} attempts: {1}")]
    RetriesExhausted(u32, String),
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
    #[error("bundle term is not split: {0}")]
    NonSplitTerm(String),
    #[error("spectral sequence does not degenerate: {0}")]
    Degeneration(String),
    #[error("repeated point in point set")]
    RepeatedPoint,
    #[error("odd degree {0}")]
    OddDegree(u32),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}
