use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("words live in different free product contexts")]
    ContextMismatch,

    #[error("factor index {index} out of range for a context with {count} factors")]
    InvalidFactor { index: usize, count: usize },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("invalid seed input: {0}")]
    InvalidSeed(String),

    #[error("invalid car motion: {0}")]
    InvalidMotion(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

/// A serde error placed at its byte offset in `text`.
pub(crate) fn json_error(text: &str, e: &serde_json::Error) -> Error {
    let offset: usize = text
        .split_inclusive('\n')
        .take(e.line().saturating_sub(1))
        .map(str::len)
        .sum();
    Error::parse(
        offset + e.column().saturating_sub(1),
        format!("line {} column {}: {e}", e.line(), e.column()),
    )
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
