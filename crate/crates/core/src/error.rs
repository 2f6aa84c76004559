use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Caller violated a precondition (shape mismatch, bad index, too few samples).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Iterative numerical routine gave up; `best` is the last estimate.
    #[error("no convergence: {message} (best estimate {best})")]
    Convergence { message: String, best: f64 },

    /// Exhaustive enumeration would exceed the configured cap.
    #[error(
        "enumeration of {candidates} candidate sub-matrices exceeds the cap of {cap}; \
         use smaller arrays or fewer RF chains (e.g. n_r = n_t = 9, l_r = l_t = 2) \
         or raise enum_cap"
    )]
    Capacity { candidates: u128, cap: u64 },

    /// Invalid scenario configuration; the message names the field.
    #[error("invalid configuration: {field}: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn config(field: &str, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_string(),
            message: msg.into(),
        }
    }
}
