//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computation would exceed the configured enumeration budget.
    /// Callers can retry with a larger `norm_budget`.
    #[error("capacity: needs norm budget {required}, configured budget is {budget}")]
    Capacity { required: u64, budget: u64 },

    /// A result failed to reach its required accuracy.
    #[error("accuracy: {context}: achieved {achieved:.3e}, required {required:.3e}")]
    Accuracy {
        context: &'static str,
        achieved: f64,
        required: f64,
    },

    /// Evaluation at (or too near) a pole of the function.
    #[error("pole: {0}")]
    Pole(String),

    /// The operation is not defined for this test function.
    #[error("unsupported for this test function: {0}")]
    Unsupported(&'static str),

    /// Two independent internal routes disagreed beyond tolerance.
    #[error("internal consistency: {0}")]
    Consistency(String),

    /// A cache file is malformed (bad magic, version, or truncated payload).
    #[error("cache format: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
