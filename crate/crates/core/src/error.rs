use thiserror::Error;

/// Errors raised by the algebra, polynomial and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unsupported dimension m = {0} (expected 2..=12)")]
    UnsupportedDimension(usize),
    #[error("generator index {index} out of range for m = {m}")]
    GeneratorOutOfRange { index: usize, m: usize },
    #[error("expected a vector (grade-1 element), got {0}")]
    NotAVector(String),
    #[error("zero vector has no inverse")]
    ZeroVector,
    #[error("reflection requires a unit vector, |a|^2 = {0}")]
    NotUnit(String),
    #[error("witt basis requires even m, got {0}")]
    OddDimension(usize),
    #[error("not homogeneous of degree {degree} in {group}")]
    NotHomogeneous { group: char, degree: u32 },
    #[error("not harmonic in {0}")]
    NotHarmonic(char),
    #[error("not {0}-monogenic in {1}")]
    NotMonogenic(&'static str, char),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("singular point: {0}")]
    Singular(String),
    #[error("weight parity mismatch: {0} vs {1}")]
    WeightParity(u32, u32),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
