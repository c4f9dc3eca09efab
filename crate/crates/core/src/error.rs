use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unsupported pushout: {0}")]
    UnsupportedPushout(String),
    #[error("codomain mismatch: {0}")]
    CodomainMismatch(String),
    #[error("not a degeneracy quotient: {0}")]
    NotAQuotient(String),
    #[error("square does not commute: {0}")]
    NonCommuting(String),
    #[error("left leg is not a cofibration: {0}")]
    NotACofibration(String),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("certificate search failed: {0}")]
    SearchFailed(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
