use thiserror::Error;

/// Crate-wide error type. Variants carry enough context to tell a caller
/// whether the input was invalid, an iteration failed to converge, or a
/// numerical safeguard tripped.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative scheme failed to converge within its budget.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// The Levinson recursion produced a non-positive innovation variance,
    /// which signals a non-positive-definite covariance or precision loss.
    #[error("recursion breakdown at order {order}: sigma2 = {sigma2:e}")]
    Breakdown { order: usize, sigma2: f64 },

    /// A root bracket could not be established or a root finder failed.
    #[error("root finding failed: {0}")]
    RootFinding(String),

    /// A linear system was singular or too ill-conditioned to trust.
    #[error("ill-conditioned system: {0}")]
    IllConditioned(String),

    /// A quadrature node landed on (or too close to) a pole of the integrand.
    #[error("pole proximity: {0}")]
    PoleProximity(String),

    /// A series or integral truncation budget could not meet its tolerance.
    #[error("truncation budget exceeded: {0}")]
    Truncation(String),

    /// A covariance table does not extend to the requested lag.
    #[error("insufficient lags: need {needed}, have {available}")]
    InsufficientLag { needed: usize, available: usize },

    /// The MA polynomial has a zero on the unit circle, which the main
    /// comparison routines refuse (a dedicated harness accepts it).
    #[error("MA polynomial has a unit-circle zero at {0}")]
    UnitCircleZero(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
