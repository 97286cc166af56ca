//! Error type shared across the crate.

/// Errors surfaced by the library and the benchmark harness.
///
/// The CLI maps these onto exit codes: validation/argument problems → 1,
/// numerical problems → 2, I/O → 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A Barzilai-Borwein formula was evaluated on a pair it is undefined for
    /// (zero denominator). The safeguarded policy layer never surfaces this;
    /// it falls back and flags the round instead.
    #[error("degenerate secant pair: {0}")]
    DegenerateSecant(String),

    #[error("numerical failure at round {round}: {message}")]
    NumericalFailure { round: usize, message: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("config validation failed: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
