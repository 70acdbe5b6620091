use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    /// Bad command-line input or configuration; exit code 2.
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
