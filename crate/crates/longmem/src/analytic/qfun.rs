//! The symbol Q(z) = (1/4π)(z⁻¹ - 2 + z)(μ(z) + μ(1/z)): a sectionally
//! holomorphic extension of the driving-noise spectral density off the unit
//! circle, cut along ℝ₊, with Q(e^{iλ}) = f₀(λ) and Q(z) = Q(1/z).
//!
//! Besides plain evaluation this module provides the closed boundary formula
//! for the upper limit Q⁺ on (1, ∞), the induced cut phase
//! η(t) = arg Q⁺(t) on (0, 1), and the single zero pair {s₀, 1/s₀} that Q
//! acquires when d > 0.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quad::composite_legendre;

use super::polylog::mu;

/// Q(z) on ℂ \ ℝ₊. On the cut the sign of `z.im` picks the one-sided limit.
pub fn q_fun(d: f64, z: Complex64) -> Complex64 {
    let w = (1.0 - z) * (1.0 - z) / z;
    w * (mu(d, z) + mu(d, z.inv())) / (4.0 * PI)
}

/// Upper boundary limit Q⁺(t) for t ∈ (1, ∞):
///
///   Q⁺(t) = (1/8π) (1-t)²/sin(πd) · (π A⁺(t) e^{iπd} + 2 Re(i e^{iπd} B(t))),
///
/// with A⁺(t) = 4d(2d+1)/Γ(1-2d) · (log t)^{-2d-2}/t and B(t) the companion
/// contour integral. The lower limit is the conjugate.
pub fn q_plus_boundary(d: f64, t: f64) -> Complex64 {
    debug_assert!(t > 1.0);
    let l = t.ln();
    let (a_hat, b_hat) = boundary_parts(d, l);
    let scale = (1.0 - t) * (1.0 - t) * l.powf(-2.0 * d - 1.0) / t;
    scale / (8.0 * PI * (PI * d).sin()) * bracket(d, l, a_hat, b_hat)
}

/// Cut phase η(t) = arg Q⁺(t) ∈ (-π, π] for t ∈ (0, 1), parameterized by
/// s = log(1/t) > 0. Uses Q⁺(t) = conj(Q⁺(1/t)) and works on rescaled
/// quantities so that no intermediate overflows even for very large s.
pub fn eta_at_log(d: f64, s: f64) -> f64 {
    debug_assert!(s > 0.0);
    let (a_hat, b_hat) = boundary_parts(d, s);
    let v = bracket(d, s, a_hat, b_hat) * (PI * d).sin().signum();
    -v.arg()
}

/// η(t) for t ∈ (0, 1).
pub fn eta(d: f64, t: f64) -> f64 {
    debug_assert!(t > 0.0 && t < 1.0);
    eta_at_log(d, -t.ln())
}

/// A⁺ and B with the common positive factor (log t)^{-2d-1}/t removed, so
/// that only the final assembly reintroduces scale.
fn boundary_parts(d: f64, l: f64) -> (f64, Complex64) {
    let g = gamma(1.0 - 2.0 * d);
    let a_hat = 4.0 * d * (2.0 * d + 1.0) / (g * l);
    let b_hat = -2.0 * d / g * b_integral(d, l);
    (a_hat, b_hat)
}

fn bracket(d: f64, _l: f64, a_hat: f64, b_hat: Complex64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, PI * d);
    PI * a_hat * rot + 2.0 * (Complex64::i() * rot * b_hat).re
}

/// ∫_0^∞ (1 + (log u + iπ)/L)^{-2d-1} (u+1)^{-2} du after u = e^y, where the
/// measure becomes dy/(4 cosh²(y/2)). The base keeps imaginary part π/L > 0,
/// so the principal power never crosses its cut.
fn b_integral(d: f64, l: f64) -> Complex64 {
    let p = -2.0 * d - 1.0;
    let edges = [
        -60.0, -30.0, -14.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 14.0, 30.0, 60.0,
    ];
    composite_legendre(&edges, 32).integrate_complex(|y| {
        let c = (0.5 * y).cosh();
        Complex64::new(1.0 + y / l, PI / l).powf(p) * (0.25 / (c * c))
    })
}

/// The zero s₀ ∈ (-1, 0) of Q, present exactly when d > 0.
///
/// On (-1, 0) the factor (1-z)²/z never vanishes, so s₀ is located as the
/// sign change of r(s) = μ(s) + μ(1/s), which is real there: r(-1) < 0 while
/// r(0⁻) → 0 through positive values.
pub fn q_zero(d: f64) -> Result<Option<f64>> {
    if d < 0.0 {
        return Ok(None);
    }
    let r = |s: f64| (mu(d, Complex64::new(s, 0.0)) + mu(d, Complex64::new(1.0 / s, 0.0))).re;
    let mut lo = -1.0;
    let r_lo = r(lo);
    if r_lo >= 0.0 {
        return Err(Error::RootFinding(format!(
            "expected a negative symbol value at -1, got {r_lo}"
        )));
    }
    let mut hi = f64::NAN;
    for k in 1..=48 {
        let s = -(2.0f64).powi(-k);
        if r(s) > 0.0 {
            hi = s;
            break;
        }
        lo = s;
    }
    if hi.is_nan() {
        return Err(Error::RootFinding(
            "no sign change of the symbol on (-1, 0)".into(),
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if r(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}
