use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown query: {0}")]
    UnknownQuery(String),
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] gaussgate::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = Result<T, CliError>;
