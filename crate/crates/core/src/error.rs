use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("size {n} exceeds the cap of {cap} (raise it with TEMPLIE_MAX_N)")]
    SizeCap { n: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("arc ({i},{j}) has negative depth {depth} with no zero-depth arc")]
    NegativeDepth { i: usize, j: usize, depth: i64 },
    #[error("numerical routine failed: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameters(msg.into()))
}
