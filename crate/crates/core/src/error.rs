use thiserror::Error;

#[derive(Debug, Error)]
pub enum OmaError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Every vertical translation of the mesh is constrained.
    #[error("model has no free measurement channels")]
    NoChannels,

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl OmaError {
    /// True for failures of the numerical kernels (factorizations, root
    /// finding), as opposed to bad arguments or I/O.
    pub fn is_numerical(&self) -> bool {
        matches!(self, OmaError::Numerical(_))
    }
}

impl From<csv::Error> for OmaError {
    fn from(err: csv::Error) -> Self {
        OmaError::Format(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, OmaError>;
