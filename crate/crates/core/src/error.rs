use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The state has zero norm (or collapsed to zero through interference).
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),

    /// A state-dependent potential was handed to a linear propagator.
    #[error("wrong method: {0}")]
    WrongMethod(String),

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("no convergence after {steps} steps (last energy {last_energy})")]
    ConvergenceFailure { steps: usize, last_energy: f64 },

    #[error("unknown quantity `{0}`")]
    UnknownQuantity(String),

    #[error("degenerate vector: {0}")]
    DegenerateVector(String),

    #[error("degenerate embedding: {0}")]
    DegenerateEmbedding(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
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
