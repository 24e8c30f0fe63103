use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CasimirError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid or inconsistent model/configuration parameters.
    #[error("configuration error: {0}")]
    Config(String),
    /// The model cannot be used with the requested operation.
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    /// Malformed input data. `line` is 1-based when known.
    #[error("ingestion error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Ingestion { line: Option<usize>, message: String },
    /// A numerical procedure failed to reach the requested accuracy.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// The quantity is ill-defined because a denominator vanished.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CasimirError {
    fn from(e: std::io::Error) -> Self {
        CasimirError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CasimirError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(CasimirError::Domain(msg.into()))
}

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(CasimirError::Config(msg.into()))
}
