use thiserror::Error;

/// Errors produced anywhere in the compilation toolkit.
#[derive(Debug, Error)]
pub enum QwcError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("invalid circuit: {0}")]
    Circuit(String),

    #[error("{qubits} qubits exceeds the configured maximum of {max}")]
    Resource { qubits: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parameter {index} drives a {kind} gate, which has no two-eigenvalue generator")]
    UnsupportedGenerator { index: usize, kind: &'static str },

    #[error("simplex exceeded its iteration cap of {cap}")]
    IterationLimit { cap: usize },

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, QwcError>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(QwcError::DimensionMismatch { expected, found })
    }
}
