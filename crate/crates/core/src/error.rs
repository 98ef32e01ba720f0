use thiserror::Error;

/// Errors produced by the mechanisms, calculators, and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation that needs at least one example was given none.
    #[error("dataset is empty")]
    EmptyDataset,

    /// The query budget of a mechanism has been fully consumed.
    #[error("query budget exhausted")]
    BudgetExhausted,

    /// A configuration would require more memory or work than the configured cap.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A transcript could not be replayed from the recorded hard queries.
    #[error("transcript reconstruction failed: {0}")]
    Reconstruction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
