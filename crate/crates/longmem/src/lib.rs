//! Exact finite prediction for long-memory Gaussian sequences, plus the
//! complex-analytic machinery that reproduces the same first-order
//! asymptotics from the spectral side.
//!
//! The two halves are deliberately independent: covariance-domain prediction
//! (Levinson-Durbin on exact covariances) and an analytic pipeline (boundary
//! phase, canonical factorization, contraction integral equations, small
//! algebraic systems) that predicts how the prediction coefficients behave
//! for large n. Each side is used to validate the other.

pub mod analytic;
pub mod asympt;
pub mod checks;
pub mod dd;
pub mod error;
pub mod hilbert_verify;
pub mod inteq;
pub mod poly;
pub mod predictor;
pub mod process;
pub mod quad;
pub mod spectral;

pub use error::{Error, Result};
pub use predictor::{levinson_trace, Precision, PredictorTrace};
pub use process::{arima_covariance, fgn_covariance, CovarianceTable, ProcessSpec};
