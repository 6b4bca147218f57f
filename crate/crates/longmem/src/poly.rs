//! Real polynomials with complex evaluation and root finding.
//!
//! Coefficients are stored in ascending order, so `c[0]` is the constant
//! term. Roots come from the companion-matrix eigenvalues polished by a few
//! Newton steps; degrees in this crate are small (MA/AR orders), so the
//! dense eigensolver is more than adequate.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients, trimming trailing
    /// zeros (an all-zero input collapses to the zero polynomial `[0]`).
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Poly { coeffs }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1.0]
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![0.0]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// All complex roots (degree many). Eigenvalues of the companion matrix,
    /// each polished by Newton iterations on the polynomial itself.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let n = self.degree();
        if n == 0 {
            return Ok(Vec::new());
        }
        let lead = *self.coeffs.last().unwrap();
        if lead == 0.0 {
            return Err(Error::RootFinding("zero leading coefficient".into()));
        }
        let mut companion = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            companion[(i, n - 1)] = -self.coeffs[i] / lead;
        }
        let eig = companion.complex_eigenvalues();
        let deriv = self.derivative();
        let mut roots: Vec<Complex64> = eig
            .iter()
            .map(|&z| {
                let mut r = z;
                for _ in 0..4 {
                    let f = self.eval(r);
                    let df = deriv.eval(r);
                    if df.norm() == 0.0 {
                        break;
                    }
                    let step = f / df;
                    r -= step;
                    if step.norm() < 1e-15 * (1.0 + r.norm()) {
                        break;
                    }
                }
                r
            })
            .collect();
        // Deterministic order: by modulus, then argument.
        roots.sort_by(|a, b| {
            (a.norm(), a.arg())
                .partial_cmp(&(b.norm(), b.arg()))
                .unwrap()
        });
        Ok(roots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn evaluates_with_horner() {
        let p = Poly::new(vec![1.0, -0.5, 0.25]);
        assert_relative_eq!(p.eval_real(2.0), 1.0 - 1.0 + 1.0);
        let z = Complex64::new(0.0, 1.0);
        let expected = Complex64::new(1.0 - 0.25, -0.5);
        assert_relative_eq!(p.eval(z).re, expected.re, max_relative = 1e-15);
        assert_relative_eq!(p.eval(z).im, expected.im, max_relative = 1e-15);
    }

    #[test]
    fn finds_real_and_complex_roots() {
        // (1 - z/2)(1 + z/3) = 1 + z/6 - z^2/6.
        let p = Poly::new(vec![1.0, 1.0 / 6.0, -1.0 / 6.0]);
        let roots = p.roots().unwrap();
        assert_eq!(roots.len(), 2);
        let mut mods: Vec<f64> = roots.iter().map(|r| r.norm()).collect();
        mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(mods[0], 2.0, max_relative = 1e-12);
        assert_relative_eq!(mods[1], 3.0, max_relative = 1e-12);

        // 1 + z^2 has roots ±i.
        let q = Poly::new(vec![1.0, 0.0, 1.0]);
        let roots = q.roots().unwrap();
        for r in roots {
            assert_relative_eq!(r.norm(), 1.0, max_relative = 1e-12);
            assert_relative_eq!(r.re, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn constant_polynomial_has_no_roots() {
        assert!(Poly::one().roots().unwrap().is_empty());
    }
}
