use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("K = {k} is outside 1..={n}")]
    KOutOfRange { k: usize, n: usize },

    #[error("sample size {0} is too small (need n >= 4)")]
    SampleTooSmall(usize),

    #[error("loss is unbounded; a bounded surrogate is required")]
    UnboundedLoss,

    #[error("penalty cannot be certified coercive")]
    NonCoercivePenalty,

    #[error("not enough instances for this attack: {0}")]
    InsufficientInstances(String),

    #[error("bounds violated: {0}")]
    BoundsViolated(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("no sign change located on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("query is outside every covered regime: {0}")]
    OutsideRegime(String),

    #[error("empty search family")]
    EmptySearch,

    #[error("solver did not converge after {iterations} iterations (KKT residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("all trials were nonexistent or pre-broken")]
    AllTrialsNonexistent,

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
