//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A hyperparameter or derived hyperparameter is outside its valid range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Matrix/vector dimensions do not line up.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A non-finite value was found where the invariants require finite data.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// Logistic response is all-0 or all-1, so the loss-minimal offset is infinite.
    #[error("degenerate response: {0}")]
    DegenerateResponse(String),

    /// Response values do not match the requested loss.
    #[error("invalid response for loss: {0}")]
    InvalidResponse(String),

    /// Every column is constant, so no base learner can be fit.
    #[error("no usable covariate: all columns are constant")]
    NoUsableCovariate,

    /// A resampling draw kept producing degenerate subsets.
    #[error("retry limit ({limit}) exhausted: {context}")]
    RetryLimit { limit: usize, context: String },

    /// TPR is undefined without informative variables.
    #[error("empty informative set: true positive rate is undefined")]
    EmptyInformativeSet,
}
