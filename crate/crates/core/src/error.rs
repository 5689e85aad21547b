use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("budget exceeded in {stage}: {count} items (budget {budget})")]
    Budget { stage: String, count: usize, budget: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("action is not free: cell {cell} is fixed")]
    NotFree { cell: usize },

    #[error("lookup failed: {0}")]
    Lookup(String),

    #[error("internal defect: {0}")]
    Defect(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }

    pub(crate) fn budget(stage: impl Into<String>, count: usize, budget: usize) -> Self {
        Error::Budget {
            stage: stage.into(),
            count,
            budget,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
