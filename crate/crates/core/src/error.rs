use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid support: {0}")]
    InvalidSupport(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("precondition {code} failed: {detail}")]
    Precondition { code: &'static str, detail: String },
    #[error("lattice distance undefined: {0}")]
    UndefinedDistance(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn precondition(code: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition {
            code,
            detail: detail.into(),
        }
    }

    /// Errors caused by the input rather than by a failed self-check.
    pub fn is_user_error(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
