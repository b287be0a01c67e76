use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix entry count {len} is not a perfect square of dim {dim}")]
    BadEntryCount { dim: usize, len: usize },

    #[error("invalid dimension vector: {0}")]
    InvalidDims(String),

    #[error("local dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("subsystem {subsystem} out of range for {count} subsystems")]
    SubsystemOutOfRange { subsystem: usize, count: usize },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("matrix is not Hermitian: |m[{row},{col}] - conj(m[{col},{row}])| = {defect:e}")]
    NotHermitian { row: usize, col: usize, defect: f64 },

    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },

    #[error("spin label ({j},{k}) does not define a subgroup projection for d = {d}")]
    InvalidProjectionLabel { d: usize, j: usize, k: usize },

    #[error("{0} is not prime")]
    NotPrime(usize),

    #[error("need at least {min} subsystems, got {actual}")]
    TooFewSubsystems { min: usize, actual: usize },

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("s = {s} exceeds the separability threshold {threshold}")]
    AboveThreshold { s: f64, threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
