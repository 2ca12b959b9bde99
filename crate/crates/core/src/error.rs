use thiserror::Error;

/// Errors raised by the solver components.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid route: {0}")]
    InvalidRoute(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{what} is {value}, above the limit of {limit}; {hint}")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("simplex did not terminate within {0} iterations")]
    IterationLimit(usize),

    #[error("sampler failed: {0}")]
    Sampler(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
