use thiserror::Error;

#[derive(Debug, Error)]
pub enum AutodiffError {
    #[error("invalid layer spec: {0}")]
    InvalidSpec(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
