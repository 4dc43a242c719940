use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Labels or sizes outside the admissible domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The model lacks the structure the operation needs (e.g. no S-matrix).
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("empty sector: {0}")]
    EmptySector(String),

    /// Input violates a documented precondition (unnormalised state, PSD violation, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("too few levels: need at least {needed}, got {got}")]
    TooFewLevels { needed: usize, got: usize },

    #[error("malformed model document: {0}")]
    Model(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
