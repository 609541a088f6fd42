//! Error-to-exit-code mapping.
//!
//! Exit codes: 0 success, 2 precondition failure, 3 parse failure,
//! 4 budget refusal. Anything else (I/O trouble) exits 1.

use koenig::chromatic::ChromaticError;
use koenig::compactness::TreeError;
use koenig::gadgets::{GadgetError, InjectionError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Budget(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 3,
            CliError::Precondition(_) => 2,
            CliError::Budget(_) => 4,
            CliError::Io { .. } => 1,
        }
    }

    pub fn parse(path: &str, line: usize, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.to_string(),
            line,
            message: message.into(),
        }
    }
}

impl From<ChromaticError> for CliError {
    fn from(e: ChromaticError) -> Self {
        match e {
            ChromaticError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<TreeError> for CliError {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<GadgetError> for CliError {
    fn from(e: GadgetError) -> Self {
        match e {
            GadgetError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<InjectionError> for CliError {
    fn from(e: InjectionError) -> Self {
        CliError::Precondition(e.to_string())
    }
}
