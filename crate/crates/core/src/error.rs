use thiserror::Error;

/// Errors produced by graph construction, spectral routines, detection and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph generation failed: {0}")]
    GenerationFailed(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("frequency response has a pole at lambda = {lambda}")]
    SingularResponse { lambda: f64 },

    #[error("degenerate passband: min |h| = {min_magnitude:e}, lowpass ratio undefined")]
    DegeneratePassband { min_magnitude: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 3 for numerical failures and replay
    /// mismatches, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericalFailure(_)
            | Error::SingularResponse { .. }
            | Error::DegeneratePassband { .. }
            | Error::ReplayMismatch(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
