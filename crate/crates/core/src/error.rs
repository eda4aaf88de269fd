use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("not a point of the Siegel upper half space: {0}")]
    InvalidPoint(String),

    #[error("invalid group element: {0}")]
    InvalidElement(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("polynomial is not in the span of the basis")]
    NotInSpan,

    #[error("tail bound {bound:.3e} exceeds the budget {budget:.3e}; increase the truncation")]
    TailBudget { bound: f64, budget: f64 },

    #[error("truncation asymmetry: {0}")]
    TruncationAsymmetry(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
