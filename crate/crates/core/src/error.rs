use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("validation: {0}")]
    Validation(String),

    /// The reshaped two-electron matrix has a significantly negative eigenvalue.
    #[error("indefinite tensor: {0}")]
    Indefinite(String),

    /// Operands disagree in size.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Request exceeds a hard capability bound (e.g. dense simulation size).
    #[error("capability: {0}")]
    Capability(String),

    /// A text asset failed to parse; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }

    pub fn dimension(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
