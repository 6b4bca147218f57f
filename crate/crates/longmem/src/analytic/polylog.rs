//! The series Σ_{k≥1} k^{2d+1} z^k and its holomorphic extension to
//! ℂ \ [1, ∞).
//!
//! Inside the disk the series converges directly. Outside, the extension is
//! evaluated through the frequency-domain expansion
//!
//!   μ(z) = Γ(2+2d) Σ_{k∈ℤ} (-log z + 2πik)^{-2-2d},
//!
//! with the principal argument taken in every term. The tail of the k-sum
//! decays only like |k|^{-2-2d}, so it is closed with the midpoint
//! Euler-Maclaurin formula rather than summed outright.

use std::f64::consts::TAU;

use num_complex::Complex64;
use statrs::function::gamma::gamma;

/// Largest |z| at which the plain power series is used.
const SERIES_RADIUS: f64 = 0.65;

/// Frequencies summed directly on each side before the tail closure.
const DIRECT_FREQUENCIES: i64 = 24;

/// μ(z) = Σ_{k≥1} k^{2d+1} z^k on ℂ \ [1, ∞).
///
/// On the cut itself the two one-sided limits exist and the sign of `z.im`
/// (including signed zero) selects between them.
pub fn mu(d: f64, z: Complex64) -> Complex64 {
    if z.norm() <= SERIES_RADIUS {
        mu_series(d, z)
    } else {
        mu_lindelof(d, z)
    }
}

fn mu_series(d: f64, z: Complex64) -> Complex64 {
    let p = 2.0 * d + 1.0;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut zk = Complex64::new(1.0, 0.0);
    for k in 1..=400u32 {
        zk *= z;
        let term = (k as f64).powf(p) * zk;
        sum += term;
        if k > 8 && term.norm() <= 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

fn mu_lindelof(d: f64, z: Complex64) -> Complex64 {
    let s = 2.0 + 2.0 * d;
    let a = -z.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    for k in -(DIRECT_FREQUENCIES - 1)..DIRECT_FREQUENCIES {
        // adding +0i to a would overwrite a signed zero in a.im and with it
        // the one-sided branch on the cut, so the k = 0 term stands alone
        let w = if k == 0 {
            a
        } else {
            a + Complex64::new(0.0, TAU * k as f64)
        };
        sum += w.powf(-s);
    }
    sum += frequency_tail(a, s, DIRECT_FREQUENCIES, 1.0);
    sum += frequency_tail(a, s, DIRECT_FREQUENCIES, -1.0);
    gamma(s) * sum
}

/// Σ_{k≥m} (a + 2πiσk)^{-s}, closed at the midpoint m - 1/2. With m ≥ 2 the
/// vertical integration path stays clear of the negative real axis, so one
/// principal branch serves every term.
fn frequency_tail(a: Complex64, s: f64, m: i64, sigma: f64) -> Complex64 {
    let c = Complex64::new(0.0, TAU * sigma);
    let w = a + c * (m as f64 - 0.5);
    let integral = w.powf(1.0 - s) / (c * (s - 1.0));
    let d1 = -s * c * w.powf(-s - 1.0);
    let d3 = -s * (s + 1.0) * (s + 2.0) * c.powu(3) * w.powf(-s - 3.0);
    let d5 = -s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * c.powu(5) * w.powf(-s - 5.0);
    integral + d1 / 24.0 - d3 * 7.0 / 5760.0 + d5 * 31.0 / 967_680.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{composite_legendre, gauss_jacobi_panel};

    /// Independent route: μ(z) = (1/Γ(1-2d)) ∫_1^∞ (log τ)^{-2d} z(τ+z)/(τ-z)³ dτ,
    /// evaluated after τ = e^x with the x^{-2d} endpoint weight given to a
    /// Jacobi rule.
    fn mu_integral(d: f64, z: Complex64) -> Complex64 {
        let f = |x: f64| {
            let ex = Complex64::new(x.exp(), 0.0);
            z * ex * (ex + z) / (ex - z).powu(3)
        };
        let head = gauss_jacobi_panel(0.0, 1.0, 0.0, -2.0 * d, 80).integrate_complex(f);
        let tail = composite_legendre(&[1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0], 32)
            .integrate_complex(|x| x.powf(-2.0 * d) * f(x));
        (head + tail) / gamma(1.0 - 2.0 * d)
    }

    #[test]
    fn series_and_extension_agree_in_overlap() {
        for &d in &[0.25, -0.25, 0.4, -0.4, 0.1] {
            for &(re, im) in &[(0.3, 0.4), (-0.55, 0.2), (0.0, -0.6), (-0.62, 0.0), (0.5, -0.3)] {
                let z = Complex64::new(re, im);
                let a = mu_series(d, z);
                let b = mu_lindelof(d, z);
                assert!(
                    (a - b).norm() <= 1e-12 * a.norm(),
                    "d={d} z={z}: series {a} vs extension {b}"
                );
            }
        }
    }

    #[test]
    fn extension_matches_integral_representation() {
        for &d in &[0.25, -0.25, 0.35] {
            for &(re, im) in &[(-0.8, 0.0), (0.3, 0.4), (-3.0, 0.0), (0.0, 2.0), (-1.2, -0.7)] {
                let z = Complex64::new(re, im);
                let a = mu(d, z);
                let b = mu_integral(d, z);
                assert!(
                    (a - b).norm() <= 1e-8 * a.norm().max(1e-6),
                    "d={d} z={z}: {a} vs integral {b}"
                );
            }
        }
    }

    #[test]
    fn blowup_rate_at_one_has_gamma_constant() {
        // |z-1|^{2+2d} |μ(z)| tends to Γ(2+2d) at the branch point.
        for &d in &[0.25, -0.25] {
            let h = 1e-8;
            let z = Complex64::new(1.0 - h, h);
            let scale = (z - 1.0).norm().powf(2.0 + 2.0 * d);
            let lim = scale * mu(d, z).norm();
            let expected = gamma(2.0 + 2.0 * d);
            assert!(
                (lim - expected).abs() <= 2e-3 * expected,
                "d={d}: {lim} vs {expected}"
            );
        }
    }

    #[test]
    fn decay_rate_at_infinity_has_gamma_constant() {
        // μ(z) Γ(-2d) (log z)^{1+2d} → -1 along the negative axis; the
        // residual phase from the iπ in log z fades only like 1/log|z|.
        for &d in &[0.25, -0.25] {
            let z = Complex64::new(-1e120, 0.0);
            let lim = mu(d, z) * gamma(-2.0 * d) * z.ln().powf(1.0 + 2.0 * d);
            assert!(
                (lim + 1.0).norm() < 0.05,
                "d={d}: normalized tail {lim} should be near -1"
            );
        }
    }

    #[test]
    fn one_sided_cut_limits_are_conjugate() {
        let d = 0.25;
        let above = mu(d, Complex64::new(2.0, 1e-12));
        let below = mu(d, Complex64::new(2.0, -1e-12));
        assert!((above - below.conj()).norm() <= 1e-9 * above.norm());
        assert!(above.im.abs() > 0.1, "the cut jump should be visible");
    }

    #[test]
    fn signed_zero_selects_the_one_sided_limit() {
        let d = 0.25;
        let above = mu(d, Complex64::new(2.0, 0.0));
        let below = mu(d, Complex64::new(2.0, -0.0));
        let interior = mu(d, Complex64::new(2.0, 1e-13));
        assert!((above - below.conj()).norm() <= 1e-14 * above.norm());
        assert!((above - interior).norm() <= 1e-9 * above.norm());
        assert!(above.im.abs() > 0.1, "the cut jump should be visible");
    }
}
