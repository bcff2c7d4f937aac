use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("Hurst vector not admissible: {0} (need every h in (1/2,1) and sum h > d - 1/2)")]
    Admissibility(String),

    #[error("table resolution: {0}")]
    Resolution(String),

    #[error("truncation budget exceeded: {0}")]
    Budget(String),

    #[error("size limit: {0}")]
    Size(String),

    #[error("insufficient levels: {0}")]
    InsufficientLevels(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
