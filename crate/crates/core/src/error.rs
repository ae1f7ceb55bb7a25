use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("angle out of range: {0}")]
    Range(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("singular point: {0}")]
    Singularity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
