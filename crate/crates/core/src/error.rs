use thiserror::Error;

/// Errors shared by every module in the crate.
///
/// Variants are split between data problems (ingestion, malformed input)
/// and numerical problems (non-convergence, singularities) so that callers
/// can map them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("csv error at row {row}: {message}")]
    Csv { row: usize, message: String },

    #[error("missing observation at {0} (series must be uniformly sampled; enable forward-fill to bridge gaps)")]
    TimeGap(String),

    #[error("non-positive value at index {index}: {value}")]
    NonPositive { index: usize, value: f64 },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("optimization did not converge: {0}")]
    Convergence(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// True for ingestion/data-shape problems as opposed to numerical ones.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::Csv { .. }
                | Error::TimeGap(_)
                | Error::NonPositive { .. }
                | Error::Io(_)
        )
    }
}
