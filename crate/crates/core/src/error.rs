use thiserror::Error;

#[derive(Debug, Error)]
pub enum KhError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource guard: {free} free crossings exceeds the limit of {limit} (raise --max-crossings to override)")]
    ResourceGuard { free: usize, limit: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, KhError>;
