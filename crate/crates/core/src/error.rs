use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("format error: {0}")]
    Format(String),

    /// An exact solver refused an instance above its enumeration or flow guard.
    #[error("instance too large for {solver}: {detail}")]
    SizeGuard {
        solver: &'static str,
        detail: String,
    },

    #[error("sampler failed: no level could be decoded")]
    SamplerFailure,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
