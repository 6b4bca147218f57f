//! Spectral densities and Szegő constants.
//!
//! The driving noise has density
//! `f₀(λ) = c(d) |1-e^{iλ}|² Σ_{k∈ℤ} |λ+2πk|^{-2d-2}` with
//! `c(d) = Γ(2d+2) cos(πd) / (2π)`, normalized so ∫_{-π}^{π} f₀ dλ = 1.
//! The composed process multiplies this by |θ(e^{iλ})/φ(e^{iλ})|².
//! Innovation variances come from the geometric-mean formula
//! `σ₀² = 2π exp((1/2π) ∫ log f₀ dλ)`, with the MA zeros inside the unit
//! disk contributing the exact factor Π |z_j|^{-2} on top.

use crate::error::Result;
use crate::poly::Poly;
use crate::process::ProcessSpec;
use crate::quad::{composite_graded_around, composite_legendre, gauss_jacobi_panel, graded_edges, uniform_edges, Grading};
use num_complex::Complex64;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// Direct terms on each side of k = 0 before the tail switches to
/// Euler-Maclaurin; the remainder after the two correction terms is below
/// 1e-16 relative for every admissible d.
const DIRECT_TERMS: usize = 64;

/// Prefactor c(d) = Γ(2d+2) cos(πd) / (2π); as d → 0 this tends to 1/(2π).
pub fn density_prefactor(d: f64) -> f64 {
    gamma(2.0 * d + 2.0) * (PI * d).cos() / (2.0 * PI)
}

/// Σ_{k∈ℤ} |λ+2πk|^{-s} for λ ∈ (0, π], s ∈ (1, 3): direct summation close
/// to k = 0, then the midpoint Euler-Maclaurin tail
/// Σ_{k≥m} F(k) = ∫_{m-1/2}^∞ F + F'/24 - 7 F'''/5760 + 31 F⁽⁵⁾/967680,
/// derivatives taken at m - 1/2.
fn harmonic_power_sum(lambda: f64, s: f64, direct_terms: usize) -> f64 {
    let tau = 2.0 * PI;
    let mut sum = lambda.powf(-s);
    for k in 1..=direct_terms {
        let t = tau * k as f64;
        sum += (t + lambda).powf(-s) + (t - lambda).powf(-s);
    }
    let a = direct_terms as f64 + 0.5;
    let wp = tau * a + lambda;
    let wm = tau * a - lambda;
    let pair = |p: f64| wp.powf(p) + wm.powf(p);
    let integral = pair(1.0 - s) / (tau * (s - 1.0));
    let d1 = -s * tau * pair(-s - 1.0);
    let d3 = -s * (s + 1.0) * (s + 2.0) * tau.powi(3) * pair(-s - 3.0);
    let d5 = -s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * tau.powi(5) * pair(-s - 5.0);
    sum + integral + d1 / 24.0 - d3 * 7.0 / 5760.0 + d5 * 31.0 / 967_680.0
}

/// Spectral density of the driving noise at λ ∈ [-π, π]. At λ = 0 the
/// limiting value is returned (`+∞` for d > 0, `0` for d < 0).
pub fn fgn_density(d: f64, lambda: f64) -> f64 {
    let l = lambda.abs();
    debug_assert!(l <= PI + 1e-12);
    if l == 0.0 {
        return if d > 0.0 { f64::INFINITY } else { 0.0 };
    }
    scaled_fgn_density(d, l) * l.powf(-2.0 * d)
}

/// f₀(λ) · λ^{2d}, the density with its power singularity divided out;
/// smooth and positive on [0, π], tending to c(d) at 0.
pub(crate) fn scaled_fgn_density(d: f64, lambda: f64) -> f64 {
    let l = lambda.abs();
    if l == 0.0 {
        return density_prefactor(d);
    }
    let s = 2.0 * d + 2.0;
    // |1 - e^{iλ}|² = 4 sin²(λ/2); the sin form survives λ near 0 where
    // 2(1 - cos λ) cancels.
    let half_sin = (0.5 * l).sin();
    let gain = 4.0 * half_sin * half_sin;
    density_prefactor(d) * gain * l.powf(s) * harmonic_power_sum(l, s, DIRECT_TERMS) / (l * l)
}

/// |p(e^{iλ})|² for a real-coefficient polynomial.
fn circle_modulus_sq(p: &Poly, lambda: f64) -> f64 {
    p.eval(Complex64::new(0.0, lambda).exp()).norm_sqr()
}

/// Spectral density of the composed process:
/// f(λ) = |θ(e^{iλ})/φ(e^{iλ})|² f₀(λ).
pub fn composed_density(spec: &ProcessSpec, lambda: f64) -> f64 {
    filter_gain(spec, lambda) * fgn_density(spec.d(), lambda)
}

fn filter_gain(spec: &ProcessSpec, lambda: f64) -> f64 {
    circle_modulus_sq(spec.theta(), lambda) / circle_modulus_sq(spec.phi(), lambda)
}

/// Innovation variances from the spectral side.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SzegoConstants {
    /// One-step error of the driving noise given its infinite past:
    /// σ₀² = 2π exp((1/2π) ∫ log f₀ dλ).
    pub sigma0_sq: f64,
    /// One-step error of the composed process given its infinite past:
    /// σ² = σ₀² Π_{|z_j|<1} |z_j|^{-2} over the MA zeros inside the disk.
    pub sigma2: f64,
}

/// (1/2π) ∫_{-π}^{π} [log f₀(λ) + 2d log|λ|] dλ, a bounded integrand; the
/// subtracted log term is added back in closed form by the caller.
fn log_density_bracket_mean(d: f64) -> f64 {
    let rule = composite_legendre(&graded_edges(0.0, PI, Grading::TowardA, 44), 20);
    let integral = rule.integrate(|l| scaled_fgn_density(d, l).ln());
    2.0 * integral / (2.0 * PI)
}

pub fn szego_constants(spec: &ProcessSpec) -> Result<SzegoConstants> {
    let d = spec.d();
    // ∫_0^π log λ dλ = π log π - π.
    let log_lambda_mean = 2.0 * (PI * PI.ln() - PI) / (2.0 * PI);
    let mean_log_f0 = log_density_bracket_mean(d) - 2.0 * d * log_lambda_mean;
    let sigma0_sq = 2.0 * PI * mean_log_f0.exp();
    let mut inside_factor = 1.0;
    for z in spec.ma_zeros() {
        let r = z.norm();
        if r < 1.0 - 1e-10 {
            inside_factor /= r * r;
        }
    }
    Ok(SzegoConstants {
        sigma0_sq,
        sigma2: sigma0_sq * inside_factor,
    })
}

/// (1/2π) ∫_{-π}^{π} log |p(e^{iλ})|² dλ by quadrature, grading around the
/// angles where unit-circle zeros of p make the integrand log-singular.
/// By the mean-value property this equals 2 Σ_{|z|<1} log(1/|z|); kept as an
/// independent cross-check of the zero-product route.
pub fn log_modulus_integral(p: &Poly) -> Result<f64> {
    let mut singular: Vec<f64> = vec![];
    for z in p.roots()? {
        if (z.norm() - 1.0).abs() <= 1e-8 {
            singular.push(z.arg().abs());
        }
    }
    let rule = composite_graded_around(0.0, PI, &singular, 44, 20);
    Ok(2.0 * rule.integrate(|l| circle_modulus_sq(p, l).ln()) / (2.0 * PI))
}

/// γ(k) = ∫_{-π}^{π} cos(kλ) f(λ) dλ by quadrature: a Gauss-Jacobi panel
/// absorbs the exact |λ|^{-2d} weight near 0, plain panels cover the rest.
/// Covariance oracle for the lag-domain recursions; k should stay modest so
/// the fixed rules resolve the oscillation.
pub fn covariance_by_quadrature(spec: &ProcessSpec, k: usize) -> f64 {
    let d = spec.d();
    let split = 0.25;
    let jacobi = gauss_jacobi_panel(0.0, split, 0.0, -2.0 * d, 128);
    let kf = k as f64;
    let near = jacobi.integrate(|l| {
        (kf * l).cos() * filter_gain(spec, l) * scaled_fgn_density(d, l)
    });
    let smooth = composite_legendre(&uniform_edges(split, PI, 10), 32);
    let far = smooth.integrate(|l| (kf * l).cos() * composed_density(spec, l));
    2.0 * (near + far)
}

/// CSV rows `lambda,f0,f` on the uniform grid λ_i = iπ/n, i = 1..=n.
pub fn density_csv(spec: &ProcessSpec, n: usize) -> String {
    let mut out = String::from("lambda,f0,f\n");
    for i in 1..=n {
        let l = PI * i as f64 / n as f64;
        out.push_str(&format!(
            "{},{},{}\n",
            l,
            fgn_density(spec.d(), l),
            composed_density(spec, l)
        ));
    }
    out
}
