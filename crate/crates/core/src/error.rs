use thiserror::Error;

/// Errors raised by state construction, validation and the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported matrix dimension {0} (expected 2, 3 or 4)")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: expected {expected}x{expected}, got {found}x{found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("input contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("trace is {0} (expected 1)")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("Bloch parameters lie outside the physical set (min eigenvalue {0:e})")]
    UnphysicalDecomposition(f64),

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("rank {rank} is invalid for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("measurement outcome has zero probability")]
    ZeroProbability,
}

pub type Result<T> = std::result::Result<T, Error>;
