use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("coordinate {index} out of range 1..={len}")]
    CoordinateOutOfRange { index: usize, len: usize },

    #[error("gate `{op}` takes {expected} argument(s)")]
    GateArity { op: &'static str, expected: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("arity {arity} exceeds the limit of {limit}")]
    ArityTooLarge { arity: usize, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("matrix has {labels} labels, search limit is {limit}")]
    SearchLimit { labels: usize, limit: usize },

    #[error("time budget exhausted")]
    BudgetExceeded,

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
