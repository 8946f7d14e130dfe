use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimensions must be at least 1x1, got {rows}x{cols}")]
    ZeroDimension { rows: usize, cols: usize },

    #[error("data length {actual} does not match shape (expected {expected})")]
    DataLength { expected: usize, actual: usize },

    #[error("array lengths disagree: {0}")]
    ArrayLengths(String),

    #[error("entry ({row}, {col}) is outside a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("entries are not in the required order at position {position}")]
    Unsorted { position: usize },

    #[error("duplicate entry at ({row}, {col})")]
    Duplicate { row: usize, col: usize },

    #[error("invalid offsets: {0}")]
    InvalidOffsets(String),

    #[error("{name} must be a power of two >= 1, got {value}")]
    NotPowerOfTwo { name: &'static str, value: usize },

    #[error("dimension mismatch: {left_rows}x{left_cols} times {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix group size p={matrix} does not match configured p={config}")]
    GroupSizeMismatch { matrix: usize, config: usize },

    #[error("sparsity must lie in [0, 1], got {0}")]
    InvalidSparsity(f64),

    #[error("operational intensity is undefined without DRAM traffic")]
    UndefinedIntensity,

    #[error("{0} must be positive")]
    NonPositive(&'static str),

    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
