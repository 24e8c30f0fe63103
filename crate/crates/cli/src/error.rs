use std::fmt;

use casimir_core::CasimirError;

/// CLI failure with its exit status class.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or parameters outside an operation's domain (exit 1).
    Usage(String),
    /// Unreadable or malformed input files (exit 2).
    Data(String),
    /// Numerical failure, including row-level failures in sweeps (exit 3).
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<CasimirError> for CliError {
    fn from(e: CasimirError) -> Self {
        let msg = e.to_string();
        match e {
            CasimirError::Domain(_) | CasimirError::Config(_) | CasimirError::UnsupportedModel(_) => {
                CliError::Usage(msg)
            }
            CasimirError::Ingestion { .. } | CasimirError::Io(_) => CliError::Data(msg),
            CasimirError::Numerical(_) | CasimirError::Degenerate(_) => CliError::Numeric(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
