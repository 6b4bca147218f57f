//! Exact finite one-step prediction from covariances.
//!
//! For each n the weights g_n solve the Toeplitz system
//! Σ_{k=1}^{n-1} g_n(k) γ(j-k) = γ(j), j = 1..n-1, and we track
//! σ²(n) = γ(0) - Σ g_n(j) γ(j) (prediction error using n-1 values) and
//! α(n) = (γ(n) - Σ g_n(j) γ(n-j)) / σ²(n) (the next reflection
//! coefficient). The recursion path is Levinson-Durbin with O(n) memory;
//! a dense LU solve of the same system serves as the cross-check oracle.

use crate::dd::{Dd, Scalar};
use crate::error::{Error, Result};
use crate::process::CovarianceTable;
use nalgebra::{DMatrix, DVector};

/// Error floor treated as a positive-definiteness breakdown.
const BREAKDOWN_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Double,
    DoubleDouble,
}

#[derive(Debug, Clone, Copy)]
pub struct PredictorStep {
    pub n: usize,
    /// Reflection coefficient α(n).
    pub alpha: f64,
    /// One-step prediction error σ²(n) from n-1 observations.
    pub sigma2: f64,
}

#[derive(Debug, Clone)]
pub struct PredictorTrace {
    steps: Vec<PredictorStep>,
}

impl PredictorTrace {
    pub fn steps(&self) -> &[PredictorStep] {
        &self.steps
    }

    pub fn n_max(&self) -> usize {
        self.steps.len()
    }

    pub fn alpha(&self, n: usize) -> f64 {
        self.steps[n - 1].alpha
    }

    pub fn sigma2(&self, n: usize) -> f64 {
        self.steps[n - 1].sigma2
    }

    /// CSV rows `n,alpha,sigma2,n_alpha,n_delta_over_sigma2`, where the last
    /// two columns are n·α(n) and n·(σ²(n) - σ²)/σ₀² given the infinite-past
    /// error σ² and the innovation variance σ₀² of the driving noise.
    pub fn to_csv(&self, sigma2_infinite: f64, sigma0_sq: f64) -> String {
        let mut out = String::from("n,alpha,sigma2,n_alpha,n_delta_over_sigma2\n");
        for s in &self.steps {
            let nf = s.n as f64;
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.n,
                s.alpha,
                s.sigma2,
                nf * s.alpha,
                nf * (s.sigma2 - sigma2_infinite) / sigma0_sq
            ));
        }
        out
    }
}

struct Recursion<S: Scalar> {
    gamma: Vec<S>,
    /// a[j] = current prediction coefficient a_{m,j}, 1-based in j.
    a: Vec<S>,
    order: usize,
    error: S,
}

impl<S: Scalar> Recursion<S> {
    fn new(gamma: &[f64], n_max: usize) -> Result<Self> {
        if gamma.len() <= n_max {
            return Err(Error::InsufficientLag {
                needed: n_max,
                available: gamma.len() - 1,
            });
        }
        if gamma[0] <= 0.0 {
            return Err(Error::Domain(format!(
                "covariance at lag 0 must be positive, got {}",
                gamma[0]
            )));
        }
        let gamma: Vec<S> = gamma.iter().map(|&g| S::from_f64(g)).collect();
        let error = gamma[0];
        Ok(Recursion {
            gamma,
            a: vec![S::zero(); n_max + 1],
            order: 0,
            error,
        })
    }

    /// Advance from order m-1 to m; returns (α(m), σ²(m)).
    fn step(&mut self) -> Result<(f64, f64)> {
        let m = self.order + 1;
        let sigma2 = self.error.to_f64();
        let mut acc = self.gamma[m];
        for j in 1..m {
            acc = acc - self.a[j] * self.gamma[m - j];
        }
        let k = acc / self.error;
        let mut lo = 1;
        let mut hi = m - 1;
        while lo < hi {
            let (x, y) = (self.a[lo], self.a[hi]);
            self.a[lo] = x - k * y;
            self.a[hi] = y - k * x;
            lo += 1;
            hi -= 1;
        }
        if lo == hi {
            self.a[lo] = self.a[lo] - k * self.a[lo];
        }
        self.a[m] = k;
        self.error = self.error * (S::one() - k * k);
        self.order = m;
        let e = self.error.to_f64();
        if e <= BREAKDOWN_FLOOR || e.is_nan() {
            return Err(Error::Breakdown { order: m, sigma2: e });
        }
        Ok((k.to_f64(), sigma2))
    }

    fn coefficients(&self) -> Vec<f64> {
        self.a[1..=self.order].iter().map(|c| c.to_f64()).collect()
    }
}

fn trace_generic<S: Scalar>(gamma: &[f64], n_max: usize) -> Result<PredictorTrace> {
    let mut rec = Recursion::<S>::new(gamma, n_max)?;
    let mut steps = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (alpha, sigma2) = rec.step()?;
        steps.push(PredictorStep { n, alpha, sigma2 });
    }
    Ok(PredictorTrace { steps })
}

/// α(n) and σ²(n) for n = 1..=n_max by the Levinson-Durbin recursion.
pub fn levinson_trace(
    cov: &CovarianceTable,
    n_max: usize,
    precision: Precision,
) -> Result<PredictorTrace> {
    match precision {
        Precision::Double => trace_generic::<f64>(cov.values(), n_max),
        Precision::DoubleDouble => trace_generic::<Dd>(cov.values(), n_max),
    }
}

/// The weights g_n(1..=n-1); row n of the recursion, so an O(n²) run.
pub fn prediction_weights(
    cov: &CovarianceTable,
    n: usize,
    precision: Precision,
) -> Result<Vec<f64>> {
    assert!(n >= 1);
    let run = |gamma: &[f64]| -> Result<Vec<f64>> {
        match precision {
            Precision::Double => {
                let mut rec = Recursion::<f64>::new(gamma, n - 1)?;
                for _ in 1..n {
                    rec.step()?;
                }
                Ok(rec.coefficients())
            }
            Precision::DoubleDouble => {
                let mut rec = Recursion::<Dd>::new(gamma, n - 1)?;
                for _ in 1..n {
                    rec.step()?;
                }
                Ok(rec.coefficients())
            }
        }
    };
    run(cov.values())
}

/// Given weights for some n, recompute (σ²(n), α(n)) by plain dot products.
pub fn error_and_reflection(cov: &CovarianceTable, weights: &[f64]) -> Result<(f64, f64)> {
    let n = weights.len() + 1;
    cov.try_value(n as i64)?;
    let mut sigma2 = cov.value(0);
    for (j, w) in weights.iter().enumerate() {
        sigma2 -= w * cov.value(j as i64 + 1);
    }
    let mut num = cov.value(n as i64);
    for (j, w) in weights.iter().enumerate() {
        num -= w * cov.value((n - 1 - j) as i64);
    }
    Ok((sigma2, num / sigma2))
}

/// Dense LU solve of the prediction system; oracle for the recursion.
/// Quadratic storage, so n is capped.
pub fn toeplitz_solve_direct(cov: &CovarianceTable, n: usize) -> Result<Vec<f64>> {
    assert!(n >= 1);
    if n > 2049 {
        return Err(Error::Domain(format!(
            "direct Toeplitz solve capped at n = 2049, got {n}"
        )));
    }
    cov.try_value(n as i64 - 1)?;
    let m = n - 1;
    if m == 0 {
        return Ok(Vec::new());
    }
    let mat = DMatrix::from_fn(m, m, |r, c| cov.value(r as i64 - c as i64));
    let rhs = DVector::from_fn(m, |r, _| cov.value(r as i64 + 1));
    let sol = mat
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::IllConditioned("prediction system is singular".into()))?;
    Ok(sol.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{arima_covariance, fgn_covariance, ProcessSpec};
    use approx::assert_relative_eq;

    #[test]
    fn first_reflection_coefficient_is_lag_one_correlation() {
        // For d = 1/4 fractional noise, γ(1)/γ(0) = √2 - 1.
        let cov = fgn_covariance(0.25, 8).unwrap();
        let trace = levinson_trace(&cov, 4, Precision::Double).unwrap();
        assert_relative_eq!(trace.alpha(1), 2f64.sqrt() - 1.0, max_relative = 1e-15);
        assert_eq!(trace.sigma2(1), 1.0);
    }

    #[test]
    fn second_order_error_matches_hand_formula() {
        let cov = fgn_covariance(-0.25, 8).unwrap();
        let trace = levinson_trace(&cov, 4, Precision::Double).unwrap();
        let (g0, g1) = (cov.value(0), cov.value(1));
        assert_relative_eq!(
            trace.sigma2(2),
            g0 - g1 * g1 / g0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn error_recursion_identity_holds() {
        let cov = fgn_covariance(0.25, 64).unwrap();
        let trace = levinson_trace(&cov, 64, Precision::Double).unwrap();
        for n in 1..64 {
            let predicted = trace.sigma2(n) * (1.0 - trace.alpha(n).powi(2));
            assert_relative_eq!(trace.sigma2(n + 1), predicted, max_relative = 1e-13);
        }
    }

    #[test]
    fn recursion_matches_dense_solve() {
        let specs = [
            ProcessSpec::fgn(0.25).unwrap(),
            ProcessSpec::fgn(-0.25).unwrap(),
            ProcessSpec::new(0.25, vec![1.0, 0.5], vec![1.0, -0.4]).unwrap(),
        ];
        for spec in &specs {
            let cov = arima_covariance(spec, 80, 1e-14).unwrap();
            let trace = levinson_trace(&cov, 64, Precision::Double).unwrap();
            for n in [2usize, 5, 16, 64] {
                let w = toeplitz_solve_direct(&cov, n).unwrap();
                let (sigma2, alpha) = error_and_reflection(&cov, &w).unwrap();
                assert_relative_eq!(trace.sigma2(n), sigma2, max_relative = 1e-10);
                assert_relative_eq!(trace.alpha(n), alpha, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn weights_agree_with_dense_solve() {
        let cov = fgn_covariance(0.25, 32).unwrap();
        let w_rec = prediction_weights(&cov, 24, Precision::Double).unwrap();
        let w_dir = toeplitz_solve_direct(&cov, 24).unwrap();
        assert_eq!(w_rec.len(), 23);
        for (a, b) in w_rec.iter().zip(&w_dir) {
            assert_relative_eq!(a, b, max_relative = 1e-9, epsilon = 1e-12);
        }
    }

    #[test]
    fn double_double_route_agrees_with_double() {
        let cov = fgn_covariance(-0.25, 256).unwrap();
        let a = levinson_trace(&cov, 256, Precision::Double).unwrap();
        let b = levinson_trace(&cov, 256, Precision::DoubleDouble).unwrap();
        for n in [1usize, 16, 77, 256] {
            assert_relative_eq!(a.alpha(n), b.alpha(n), max_relative = 1e-11);
            assert_relative_eq!(a.sigma2(n), b.sigma2(n), max_relative = 1e-12);
        }
    }

    #[test]
    fn degenerate_covariance_breaks_down() {
        // Perfect correlation: reflection coefficient 1, error collapses.
        let err = trace_generic::<f64>(&[1.0, 1.0, 1.0], 2).unwrap_err();
        match err {
            Error::Breakdown { order, .. } => assert_eq!(order, 1),
            other => panic!("expected breakdown, got {other}"),
        }
    }

    #[test]
    fn missing_lags_are_reported() {
        let cov = fgn_covariance(0.25, 8).unwrap();
        let err = levinson_trace(&cov, 16, Precision::Double).unwrap_err();
        match err {
            Error::InsufficientLag { needed, available } => {
                assert_eq!((needed, available), (16, 8));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn trace_csv_shape() {
        let cov = fgn_covariance(0.25, 4).unwrap();
        let trace = levinson_trace(&cov, 2, Precision::Double).unwrap();
        let csv = trace.to_csv(0.5, 1.0);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("n,alpha,sigma2,n_alpha,n_delta_over_sigma2")
        );
        assert_eq!(csv.lines().count(), 3);
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "1");
        assert_eq!(row[2], "1");
    }
}
