//! Process specifications and exact covariance sequences.
//!
//! The model class: a stationary sequence with spectral density
//! `f(λ) = |θ(e^{iλ})/φ(e^{iλ})|² f₀(λ)`, where `f₀` is the spectral density
//! of fractional Gaussian noise with memory parameter `d` and `θ`, `φ` are
//! real polynomials normalized to `θ(0) = φ(0) = 1`, with `φ` zero-free on
//! the closed unit disk. Covariances are produced in the lag domain: the fGn
//! covariance has a closed form, and the MA/AR part acts as a two-sided
//! convolution with the impulse response of `θ/φ`.

use crate::error::{Error, Result};
use crate::poly::Poly;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Tolerance band around the unit circle for classifying MA zeros.
const UNIT_CIRCLE_BAND: f64 = 1e-8;
/// AR zeros must have modulus strictly above this.
const AR_MIN_MODULUS: f64 = 1.0 + 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct ProcessSpec {
    d: f64,
    theta: Poly,
    phi: Poly,
    theta_zeros: Vec<Complex64>,
    has_unit_circle_ma_zero: bool,
    /// Largest modulus among inverse AR roots; 0 when `phi` is constant.
    ar_decay_rate: f64,
}

#[derive(Serialize, Deserialize, Clone)]
struct SpecRepr {
    d: f64,
    theta: Vec<f64>,
    phi: Vec<f64>,
}

impl TryFrom<SpecRepr> for ProcessSpec {
    type Error = Error;
    fn try_from(r: SpecRepr) -> Result<Self> {
        ProcessSpec::new(r.d, r.theta, r.phi)
    }
}

impl From<ProcessSpec> for SpecRepr {
    fn from(s: ProcessSpec) -> SpecRepr {
        SpecRepr {
            d: s.d,
            theta: s.theta.coeffs().to_vec(),
            phi: s.phi.coeffs().to_vec(),
        }
    }
}

impl ProcessSpec {
    pub fn new(d: f64, theta: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if !(d > -0.5 && d < 0.5) || d == 0.0 {
            return Err(Error::Domain(format!(
                "memory parameter d must lie in (-1/2, 1/2) \\ {{0}}, got {d}"
            )));
        }
        let theta = Poly::new(theta);
        let phi = Poly::new(phi);
        if theta.coeffs()[0] != 1.0 || phi.coeffs()[0] != 1.0 {
            return Err(Error::Domain(
                "MA and AR polynomials must be normalized to θ(0) = φ(0) = 1".into(),
            ));
        }
        let phi_zeros = phi.roots()?;
        let mut ar_decay_rate = 0.0f64;
        for z in &phi_zeros {
            if z.norm() <= AR_MIN_MODULUS {
                return Err(Error::Domain(format!(
                    "AR polynomial must be zero-free on the closed unit disk; found zero at {z}"
                )));
            }
            ar_decay_rate = ar_decay_rate.max(1.0 / z.norm());
        }
        let theta_zeros = theta.roots()?;
        for zt in &theta_zeros {
            for zp in &phi_zeros {
                if (zt - zp).norm() < 1e-8 {
                    return Err(Error::Domain(format!(
                        "MA and AR polynomials share a zero near {zt}"
                    )));
                }
            }
        }
        let has_unit_circle_ma_zero = theta_zeros
            .iter()
            .any(|z| (z.norm() - 1.0).abs() <= UNIT_CIRCLE_BAND);
        Ok(ProcessSpec {
            d,
            theta,
            phi,
            theta_zeros,
            has_unit_circle_ma_zero,
            ar_decay_rate,
        })
    }

    /// Pure fractional Gaussian noise with trivial MA/AR parts.
    pub fn fgn(d: f64) -> Result<Self> {
        ProcessSpec::new(d, vec![1.0], vec![1.0])
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn theta(&self) -> &Poly {
        &self.theta
    }

    pub fn phi(&self) -> &Poly {
        &self.phi
    }

    /// MA degree q.
    pub fn q(&self) -> usize {
        self.theta.degree()
    }

    /// AR degree p.
    pub fn p(&self) -> usize {
        self.phi.degree()
    }

    /// Zeros of the MA polynomial, sorted by modulus.
    pub fn ma_zeros(&self) -> &[Complex64] {
        &self.theta_zeros
    }

    pub fn has_unit_circle_ma_zero(&self) -> bool {
        self.has_unit_circle_ma_zero
    }

    pub fn is_pure_fgn(&self) -> bool {
        self.theta.is_one() && self.phi.is_one()
    }

    /// Effective zero count for the analytic machinery: the MA degree plus
    /// one extra slot when d > 0 (the canonical extension then has its own
    /// zero pair).
    pub fn effective_zero_count(&self) -> usize {
        self.q() + usize::from(self.d > 0.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CovarianceSource {
    FgnExact,
    ArimaFiltered,
}

/// Covariance values γ(0..=n_max); negative lags are implied by symmetry.
#[derive(Debug, Clone)]
pub struct CovarianceTable {
    gamma: Vec<f64>,
    source: CovarianceSource,
}

impl CovarianceTable {
    pub fn n_max(&self) -> usize {
        self.gamma.len() - 1
    }

    pub fn source(&self) -> CovarianceSource {
        self.source
    }

    pub fn values(&self) -> &[f64] {
        &self.gamma
    }

    /// γ(k) with symmetric extension to negative lags.
    pub fn value(&self, k: i64) -> f64 {
        self.gamma[k.unsigned_abs() as usize]
    }

    pub fn try_value(&self, k: i64) -> Result<f64> {
        let idx = k.unsigned_abs() as usize;
        self.gamma.get(idx).copied().ok_or(Error::InsufficientLag {
            needed: idx,
            available: self.n_max(),
        })
    }

    /// CSV with header `k,gamma`; numbers use shortest round-trip formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,gamma\n");
        for (k, g) in self.gamma.iter().enumerate() {
            out.push_str(&format!("{k},{g}\n"));
        }
        out
    }
}

/// Stable second difference of `x ↦ x^a` at integer `k ≥ 0`:
/// `(k+1)^a - 2 k^a + (k-1)^a`. Direct evaluation cancels catastrophically
/// for large k, so from `k = 5` on it is summed as the convergent binomial
/// series `k^a * 2 Σ_{m≥1} C(a, 2m) k^{-2m}`.
fn second_difference_pow(k: u64, a: f64) -> f64 {
    if k < 5 {
        let k = k as f64;
        return ((k + 1.0).powf(a) - 2.0 * k.powf(a)) + (k - 1.0).abs().powf(a);
    }
    let h2 = 1.0 / (k as f64 * k as f64);
    // term_m = 2 C(a, 2m) h^(2m), starting at m = 1.
    let mut term = a * (a - 1.0) * h2;
    let mut sum = term;
    let mut m = 1u32;
    while term.abs() > 1e-20 * sum.abs() && m < 64 {
        let tm = 2.0 * m as f64;
        term *= (a - tm) * (a - tm - 1.0) / ((tm + 1.0) * (tm + 2.0)) * h2;
        sum += term;
        m += 1;
    }
    (k as f64).powf(a) * sum
}

/// Exact covariance sequence of fractional Gaussian noise with memory
/// parameter `d`: γ₀(k) = ½(|k+1|^{2d+1} − 2|k|^{2d+1} + |k−1|^{2d+1}).
pub fn fgn_covariance(d: f64, n_max: usize) -> Result<CovarianceTable> {
    if !(d > -0.5 && d < 0.5) || d == 0.0 {
        return Err(Error::Domain(format!(
            "memory parameter d must lie in (-1/2, 1/2) \\ {{0}}, got {d}"
        )));
    }
    let a = 2.0 * d + 1.0;
    let gamma = (0..=n_max as u64)
        .map(|k| 0.5 * second_difference_pow(k, a))
        .collect();
    Ok(CovarianceTable {
        gamma,
        source: CovarianceSource::FgnExact,
    })
}

/// Power-series coefficients ψ of θ(z)/φ(z), truncated once the geometric
/// tail bound (rate = largest inverse AR root modulus) drops below
/// `tol · Σ|ψ_j|`.
pub fn impulse_response(spec: &ProcessSpec, tol: f64) -> Result<Vec<f64>> {
    let theta = spec.theta().coeffs();
    let phi = spec.phi().coeffs();
    let q = spec.q();
    let p = spec.p();
    if p == 0 {
        return Ok(theta.to_vec());
    }
    let r = spec.ar_decay_rate;
    debug_assert!(r < 1.0);
    let mut psi: Vec<f64> = Vec::with_capacity(q + 64);
    let mut abs_sum = 0.0;
    let max_len = 1_000_000usize;
    loop {
        let j = psi.len();
        let mut v = if j <= q { theta[j] } else { 0.0 };
        for i in 1..=p.min(j) {
            v -= phi[i] * psi[j - i];
        }
        abs_sum += v.abs();
        psi.push(v);
        if j >= q + p {
            let recent = psi[psi.len() - p..]
                .iter()
                .fold(0.0f64, |m, x| m.max(x.abs()));
            if recent * r / (1.0 - r) < tol * abs_sum {
                break;
            }
        }
        if psi.len() > max_len {
            return Err(Error::Truncation(format!(
                "impulse response did not reach tolerance {tol} within {max_len} terms"
            )));
        }
    }
    Ok(psi)
}

/// Covariance of the composed process via lag-domain filtering:
/// γ(k) = Σ_m A(m) γ₀(k+m), where A is the autocorrelation of the impulse
/// response ψ of θ/φ.
pub fn arima_covariance(spec: &ProcessSpec, n_max: usize, tol: f64) -> Result<CovarianceTable> {
    let psi = impulse_response(spec, tol)?;
    let jmax = psi.len() - 1;
    // A(m) = Σ_i ψ_{i+m} ψ_i for m ≥ 0; symmetric in m.
    let mut acorr = vec![0.0f64; jmax + 1];
    for (m, slot) in acorr.iter_mut().enumerate() {
        let mut s = 0.0;
        for i in 0..=(jmax - m) {
            s += psi[i + m] * psi[i];
        }
        *slot = s;
    }
    let base = fgn_covariance(spec.d(), n_max + jmax)?;
    let gamma = (0..=n_max as i64)
        .map(|k| {
            let mut s = acorr[0] * base.value(k);
            for m in 1..=jmax as i64 {
                s += acorr[m as usize] * (base.value(k + m) + base.value(k - m));
            }
            s
        })
        .collect();
    Ok(CovarianceTable {
        gamma,
        source: CovarianceSource::ArimaFiltered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn fgn_lag_zero_is_one() {
        let cov = fgn_covariance(0.25, 4).unwrap();
        assert_eq!(cov.value(0), 1.0);
    }

    #[test]
    fn fgn_lag_one_matches_closed_form() {
        // γ₀(1) = ½(2^{2d+1} − 2) = 2^{2d} − 1; at d = 1/4 this is √2 − 1.
        let cov = fgn_covariance(0.25, 4).unwrap();
        assert_relative_eq!(cov.value(1), 2f64.sqrt() - 1.0, max_relative = 1e-15);
    }

    #[test]
    fn series_and_direct_second_difference_agree() {
        for &d in &[-0.45, -0.25, -0.1, 0.1, 0.25, 0.45] {
            let a = 2.0 * d + 1.0;
            for k in 5u64..200 {
                let direct = {
                    let k = k as f64;
                    0.5 * ((k + 1.0).powf(a) - 2.0 * k.powf(a) + (k - 1.0).powf(a))
                };
                let series = 0.5 * second_difference_pow(k, a);
                // The direct form loses ~ 2 log10(k) digits to cancellation.
                assert_relative_eq!(series, direct, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn fgn_tail_matches_power_law() {
        let d = 0.25;
        let k = 10_000u64;
        let cov = 0.5 * second_difference_pow(k, 2.0 * d + 1.0);
        let asymptotic = d * (2.0 * d + 1.0) * (k as f64).powf(2.0 * d - 1.0);
        assert_relative_eq!(cov / asymptotic, 1.0, epsilon = 1e-3);
    }

    #[test]
    fn fgn_positive_and_decreasing_for_long_memory() {
        let cov = fgn_covariance(0.3, 512).unwrap();
        for k in 1..512 {
            assert!(cov.value(k) > 0.0);
            assert!(cov.value(k + 1) < cov.value(k));
        }
    }

    #[test]
    fn fgn_negative_lags_for_antipersistent_case() {
        let cov = fgn_covariance(-0.25, 64).unwrap();
        for k in 1..=64 {
            assert!(cov.value(k) < 0.0, "γ({k}) = {}", cov.value(k));
        }
    }

    #[test]
    fn fgn_rejects_bad_d() {
        assert!(fgn_covariance(0.0, 8).is_err());
        assert!(fgn_covariance(0.5, 8).is_err());
        assert!(fgn_covariance(-0.7, 8).is_err());
    }

    #[test]
    fn impulse_response_identity_and_finite_ma() {
        let spec = ProcessSpec::fgn(0.25).unwrap();
        assert_eq!(impulse_response(&spec, 1e-14).unwrap(), vec![1.0]);

        let spec = ProcessSpec::new(0.25, vec![1.0, 0.5], vec![1.0]).unwrap();
        assert_eq!(impulse_response(&spec, 1e-14).unwrap(), vec![1.0, 0.5]);
    }

    #[test]
    fn impulse_response_geometric_for_ar1() {
        let spec = ProcessSpec::new(0.25, vec![1.0], vec![1.0, -0.5]).unwrap();
        let psi = impulse_response(&spec, 1e-14).unwrap();
        for (j, &v) in psi.iter().take(20).enumerate() {
            assert_relative_eq!(v, 0.5f64.powi(j as i32), max_relative = 1e-13);
        }
        let tail: f64 = psi.iter().skip(40).map(|x| x.abs()).sum();
        let total: f64 = psi.iter().map(|x| x.abs()).sum();
        assert!(tail < 1e-11 * total);
    }

    #[test]
    fn arima_covariance_trivial_filter_equals_fgn() {
        let spec = ProcessSpec::fgn(-0.25).unwrap();
        let a = arima_covariance(&spec, 32, 1e-14).unwrap();
        let b = fgn_covariance(-0.25, 32).unwrap();
        for k in 0..=32 {
            assert_eq!(a.value(k), b.value(k));
        }
        assert_eq!(a.source(), CovarianceSource::ArimaFiltered);
    }

    #[test]
    fn arima_covariance_ma1_hand_expansion() {
        // θ(z) = 1 + z, φ = 1: γ(0) = 2γ₀(0) + 2γ₀(1).
        let spec = ProcessSpec::new(-0.25, vec![1.0, 1.0], vec![1.0]).unwrap();
        let got = arima_covariance(&spec, 4, 1e-14).unwrap();
        let base = fgn_covariance(-0.25, 8).unwrap();
        let expected = 2.0 * base.value(0) + 2.0 * base.value(1);
        assert_relative_eq!(got.value(0), expected, max_relative = 1e-14);
        // And γ(1) = γ₀(0) + 2γ₀(1) + γ₀(2) by the same expansion.
        let expected1 = base.value(0) + 2.0 * base.value(1) + base.value(2);
        assert_relative_eq!(got.value(1), expected1, max_relative = 1e-14);
    }

    #[test]
    fn spec_validation_rules() {
        assert!(ProcessSpec::new(0.0, vec![1.0], vec![1.0]).is_err());
        assert!(ProcessSpec::new(0.25, vec![2.0], vec![1.0]).is_err());
        // AR root on/inside the unit disk is rejected.
        assert!(ProcessSpec::new(0.25, vec![1.0], vec![1.0, -1.0]).is_err());
        assert!(ProcessSpec::new(0.25, vec![1.0], vec![1.0, -2.0]).is_err());
        // Shared MA/AR zero is rejected.
        assert!(ProcessSpec::new(0.25, vec![1.0, -0.5], vec![1.0, -0.5]).is_err());
        // Unit-circle MA zero is accepted but flagged.
        let spec = ProcessSpec::new(-0.25, vec![1.0, 1.0], vec![1.0]).unwrap();
        assert!(spec.has_unit_circle_ma_zero());
        let spec = ProcessSpec::new(0.25, vec![1.0, 0.5], vec![1.0, -0.4]).unwrap();
        assert!(!spec.has_unit_circle_ma_zero());
    }

    #[test]
    fn effective_zero_count_shifts_with_sign_of_d() {
        let plus = ProcessSpec::new(0.25, vec![1.0, 0.5], vec![1.0]).unwrap();
        let minus = ProcessSpec::new(-0.25, vec![1.0, 0.5], vec![1.0]).unwrap();
        assert_eq!(plus.effective_zero_count(), 2);
        assert_eq!(minus.effective_zero_count(), 1);
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = ProcessSpec::new(0.25, vec![1.0, 0.5], vec![1.0, -0.4]).unwrap();
        let text = spec.to_json();
        assert!(text.contains("\"d\":0.25"));
        let back = ProcessSpec::from_json(&text).unwrap();
        assert_eq!(back.d(), spec.d());
        assert_eq!(back.theta().coeffs(), spec.theta().coeffs());
        assert_eq!(back.phi().coeffs(), spec.phi().coeffs());
        assert!(ProcessSpec::from_json("{\"d\":0.0,\"theta\":[1.0],\"phi\":[1.0]}").is_err());
    }

    #[test]
    fn covariance_csv_has_header_and_rows() {
        let cov = fgn_covariance(0.25, 2).unwrap();
        let csv = cov.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("k,gamma"));
        assert_eq!(lines.next(), Some("0,1"));
        assert_abs_diff_eq!(
            lines.next().unwrap()[2..].parse::<f64>().unwrap(),
            2f64.sqrt() - 1.0
        );
    }
}
