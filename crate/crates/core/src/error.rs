use thiserror::Error;

pub type Result<T, E = GyroError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum GyroError {
    /// An input or an intermediate result left the carrier's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A domain error raised while folding a bracketed word. `path` walks
    /// from the root with `L`/`R` steps to the failing subtree.
    #[error("domain error in word subtree `{path}`: {message}")]
    WordDomain { path: String, message: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction failed at step {step}: {message}")]
    Construction { step: usize, message: String },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl GyroError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        GyroError::Domain(msg.into())
    }

    pub(crate) fn construction(step: usize, msg: impl Into<String>) -> Self {
        GyroError::Construction {
            step,
            message: msg.into(),
        }
    }
}
