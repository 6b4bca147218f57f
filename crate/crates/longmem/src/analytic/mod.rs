//! Complex-analytic side of the prediction problem: extension of the noise
//! spectral density off the unit circle, its cut phase, the canonical
//! factorization, and the contraction kernel built from them.

mod canonical;
mod polylog;
mod qfun;

pub use canonical::{AnalyticContext, DEFAULT_RESOLUTION};
pub use polylog::mu;
pub use qfun::{eta, eta_at_log, q_fun, q_plus_boundary, q_zero};
