use thiserror::Error;

/// Errors raised by the probabilistic and linear-algebra layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("weight {index} is negative ({value})")]
    NegativeWeight { index: usize, value: f64 },
    #[error("weights sum to 1 + {deviation:e}")]
    SumNotOne { deviation: f64 },
    #[error("probability space must have at least one outcome of positive weight")]
    EmptySupport,
    #[error("objects live on different probability spaces")]
    SpaceMismatch,
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("kernel entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },
    #[error("kernel row {row} sums to {sum}")]
    NotStochastic { row: usize, sum: f64 },
    #[error("kernel is not measure-preserving (max deviation {deviation:e})")]
    NotMeasurePreserving { deviation: f64 },
    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),
    #[error("kernel is not almost surely idempotent")]
    NotIdempotent,
    #[error("idempotent kernel is not self-adjoint under Bayesian inversion")]
    NotSelfAdjoint,
    #[error("idempotents are not comparable")]
    NotComparable,
    #[error("sequence is not a chain: {0}")]
    NotAChain(String),
    #[error("sequence is not monotone")]
    NotMonotone,
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("not a martingale (first failing step {step})")]
    NotAMartingale { step: usize },
    #[error("size {size} exceeds the exhaustive limit {max}")]
    TooLarge { size: usize, max: usize },
    #[error("size {size} is below the minimum {min}")]
    TooSmall { size: usize, min: usize },
    #[error("basis is not orthonormal (Gram defect {defect:e})")]
    NotOrthonormal { defect: f64 },
    #[error("matrix is not an orthogonal projector")]
    NotProjector,
    #[error("map {index} is not 1-Lipschitz (operator norm {norm})")]
    NotLipschitz { index: usize, norm: f64 },
    #[error("map {index} is not surjective")]
    NotSurjective { index: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
