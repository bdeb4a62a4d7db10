use thiserror::Error;

/// Problems with the input rather than with the mathematics; the driver
/// exits with status 2 on any of these.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed corpus: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

pub fn invalid(msg: impl Into<String>) -> InputError {
    InputError::Invalid(msg.into())
}
