use thiserror::Error;

/// Errors raised by the algebraic operations of this crate.
///
/// Parse and file-format failures live in [`crate::io::ReadError`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("indices must be strictly increasing")]
    NonIncreasingIndices,

    #[error("row scale divisor is zero")]
    ZeroScaleDivisor,

    #[error("source and destination rows must differ")]
    SameRow,

    #[error("all columns have already been consumed")]
    NoColumnsRemaining,

    #[error("triangular system is singular at diagonal {0}")]
    SingularTriangular(usize),

    #[error("leading {0}x{0} block is singular")]
    SingularBlock(usize),

    #[error("trailing rows do not vanish: matrix rank exceeds block size {0}")]
    RankMismatch(usize),

    #[error("the given rows are linearly dependent")]
    DependentRowsGiven,

    #[error("the given columns are linearly dependent")]
    DependentColumnsGiven,

    #[error("expected {expected} rows and columns (the rank), got {rows} rows and {cols} columns")]
    WrongCardinality {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix too large for brute force: {0}")]
    TooLarge(String),

    #[error("invalid random matrix spec: {0}")]
    InvalidSpec(String),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
