//! Double-double arithmetic: an unevaluated sum of two f64 giving ~31
//! significant digits. Used where cancellation in long recursions eats into
//! the plain f64 budget; the algorithms are the classical error-free
//! transformations (two_sum, fma-based two_prod) composed in the usual way.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, Default)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Requires |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + other.lo);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, other: Dd) -> Dd {
        self + (-other)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let (hi, lo) = quick_two_sum(p, e + self.hi * other.lo + self.lo * other.hi);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self - Dd::from_f64(q1) * other;
        let q2 = r.hi / other.hi;
        let r = r - Dd::from_f64(q2) * other;
        let q3 = r.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

impl PartialEq for Dd {
    fn eq(&self, other: &Dd) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

/// Real scalar abstraction so numerically delicate recursions can run in
/// plain f64 or in double-double without duplication.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + PartialOrd
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn zero() -> Self;
    fn one() -> Self;
    fn abs(self) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(x: f64) -> f64 {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn zero() -> f64 {
        0.0
    }
    #[inline]
    fn one() -> f64 {
        1.0
    }
    #[inline]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
}

impl Scalar for Dd {
    #[inline]
    fn from_f64(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    #[inline]
    fn zero() -> Dd {
        Dd::ZERO
    }
    #[inline]
    fn one() -> Dd {
        Dd::ONE
    }
    #[inline]
    fn abs(self) -> Dd {
        Dd::abs(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_keeps_cancelled_bits() {
        // (1 + 2^-80) - 1 vanishes in f64 but survives in double-double.
        let tiny = 2f64.powi(-80);
        let x = Dd::ONE + Dd::from_f64(tiny);
        let diff = x - Dd::ONE;
        assert_eq!(diff.to_f64(), tiny);
    }

    #[test]
    fn multiplication_beats_f64_rounding() {
        // (1/3)·3 in double-double is 1 to ~31 digits.
        let third = Dd::ONE / Dd::from_f64(3.0);
        let back = third * Dd::from_f64(3.0) - Dd::ONE;
        assert!(back.abs().to_f64() < 1e-31, "residual {}", back.to_f64());
    }

    #[test]
    fn division_round_trips() {
        let a = Dd::from_f64(std::f64::consts::PI);
        let b = Dd::from_f64(std::f64::consts::E);
        let r = a / b * b - a;
        assert!(r.abs().to_f64() < 1e-30);
    }

    #[test]
    fn ordering_uses_both_limbs() {
        let a = Dd::ONE + Dd::from_f64(1e-25);
        assert!(a > Dd::ONE);
        assert!((-a) < Dd::ONE);
        assert!(Dd::from_f64(-2.0).abs() == Dd::from_f64(2.0));
    }

    #[test]
    fn accumulated_sum_error_is_tiny() {
        // Σ 0.1, 10^4 times: f64 drifts ~1e-12, double-double stays exact
        // to the double-double representation of 0.1.
        let step = Dd::from_f64(0.1);
        let mut acc = Dd::ZERO;
        for _ in 0..10_000 {
            acc = acc + step;
        }
        let err = (acc - Dd::from_f64(0.1) * Dd::from_f64(10_000.0))
            .abs()
            .to_f64();
        assert!(err < 1e-26, "err {err}");
    }
}
