use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must have at least one row and one column, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("expected {expected} entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("minor order {order} out of range 1..={max}")]
    MinorOrder { order: usize, max: usize },

    #[error("minor-gcd oracle is limited to min(rows, cols) <= {limit}, got {actual}")]
    MinorGuard { limit: usize, actual: usize },

    #[error("matrix entry at ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },

    #[error("column {0} is all zero")]
    ZeroColumn(usize),

    #[error("rate {index} is invalid ({value}); rates must be finite and >= 0")]
    InvalidRate { index: usize, value: f64 },

    #[error("z[{index}] = {value} lies outside [0, 1]")]
    ZOutOfRange { index: usize, value: f64 },

    #[error("value does not fit in a machine integer: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("method {method} is not applicable: {reason}")]
    MethodNotApplicable { method: &'static str, reason: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
