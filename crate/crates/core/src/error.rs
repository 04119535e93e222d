use thiserror::Error;

pub type Result<T> = std::result::Result<T, CsError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CsError {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    Dimension {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("{context}: value {value} outside allowed range {allowed}")]
    Range {
        context: &'static str,
        value: i64,
        allowed: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("size guard exceeded: {rows}x{cols} exceeds the dense limit")]
    SizeGuard { rows: usize, cols: usize },
}

impl CsError {
    pub(crate) fn dim(context: &'static str, expected: usize, actual: usize) -> Self {
        CsError::Dimension {
            context,
            expected,
            actual,
        }
    }

    pub(crate) fn range(context: &'static str, value: i64, allowed: impl Into<String>) -> Self {
        CsError::Range {
            context,
            value,
            allowed: allowed.into(),
        }
    }
}
