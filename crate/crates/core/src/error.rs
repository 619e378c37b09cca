use thiserror::Error;

/// Errors produced by game construction, solving and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid solver state: {0}")]
    InvalidState(String),

    #[error("unsupported in current-only mode: {0}")]
    UnsupportedMode(String),

    #[error("game too large: {what} would need {count} entries (cap {cap})")]
    GameTooLarge { what: String, count: u128, cap: u128 },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid_input(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn invalid_game(msg: impl Into<String>) -> Error {
    Error::InvalidGame(msg.into())
}
