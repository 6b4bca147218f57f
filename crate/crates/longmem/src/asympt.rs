//! Large-n asymptotics of the one-step predictor via small algebraic systems.
//!
//! The sectional transforms S_{j,n} and D_{j,n} enter two square linear
//! systems of size q(d)+1, one per parity, whose rows force zeros of the
//! recombined solution at the moving-average zeros (and at the symbol zero
//! 1/s₀ when d > 0) and whose last row pins the scaling at the origin. The
//! last coefficients recover the exact prediction quantities:
//!
//!   σ²(n) = a_last + b_last,   α(n) = (a_last - b_last)/(a_last + b_last).
//!
//! Asymptotically the systems collapse to rank-one perturbations of a
//! Vandermonde matrix, which yields the closed first-order laws
//!
//!   a_last = (σ²/2)(1 + d(1+d)/n) + O(n⁻²),
//!   b_last = (σ²/2)(1 - d(1-d)/n) + O(n⁻²),
//!
//! hence α(n) ~ d/n and σ²(n) - σ² ~ σ²d²/n. Both routes are implemented;
//! the exact solve is validated against covariance-domain prediction and
//! the closed laws against the exact solve.

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::AnalyticContext;
use crate::error::{Error, Result};
use crate::inteq::KernelSystem;
use crate::process::ProcessSpec;
use crate::spectral::szego_constants;

/// Zeros relocated to the open unit disk: z_k stays if |z_k| < 1, else
/// 1/z_k, with s₀ appended when d > 0. Rows of the algebraic systems are
/// assembled at these points so the power n+2q multiplies a contraction.
pub fn inside_representatives(
    ctx: &AnalyticContext,
    spec: &ProcessSpec,
) -> Result<Vec<Complex64>> {
    let mut reps = Vec::new();
    for &z in spec.ma_zeros() {
        let r = z.norm();
        if (r - 1.0).abs() < 1e-9 {
            return Err(Error::UnitCircleZero(format!(
                "moving-average zero {z} lies on the unit circle; the parity systems degenerate"
            )));
        }
        reps.push(if r < 1.0 { z } else { z.inv() });
    }
    if ctx.d() > 0.0 {
        let s0 = ctx
            .s0()
            .ok_or_else(|| Error::Domain("missing symbol zero for d > 0".into()))?;
        reps.push(Complex64::new(s0, 0.0));
    }
    for (i, zi) in reps.iter().enumerate() {
        if zi.im.abs() < 1e-9 && zi.re > 1e-9 {
            return Err(Error::PoleProximity(format!(
                "zero representative {zi} lies on the transform cut (0,1)"
            )));
        }
        for zj in reps.iter().take(i) {
            if (zi - zj).norm() < 1e-8 {
                return Err(Error::IllConditioned(format!(
                    "repeated zero representative {zi}"
                )));
            }
        }
    }
    Ok(reps)
}

/// Solution of the two parity systems at one n.
#[derive(Debug, Clone, Serialize)]
pub struct AbSolution {
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub a_last: f64,
    pub b_last: f64,
    pub sigma2: f64,
    pub alpha: f64,
}

fn solve_parity(
    reps: &[Complex64],
    weights: &[(Complex64, Complex64)],
    transform: impl Fn(usize, Complex64) -> Result<Complex64>,
    parity: f64,
    rhs_last: Complex64,
    origin: &[Complex64],
) -> Result<Vec<Complex64>> {
    let m = origin.len();
    let mut mat = nalgebra::DMatrix::<Complex64>::zeros(m, m);
    for (k, (&zeta, &(w_in, w_out))) in reps.iter().zip(weights).enumerate() {
        for j in 0..m {
            mat[(k, j)] =
                w_in * transform(j, zeta)? + parity * w_out * transform(j, zeta.inv())?;
        }
    }
    for j in 0..m {
        mat[(m - 1, j)] = origin[j];
    }
    let mut rhs = nalgebra::DVector::<Complex64>::zeros(m);
    rhs[m - 1] = rhs_last;
    mat.lu()
        .solve(&rhs)
        .ok_or_else(|| Error::IllConditioned("singular parity system".into()))
        .map(|v| v.iter().copied().collect())
}

fn real_part_checked(value: Complex64, what: &str) -> Result<f64> {
    if value.im.abs() > 1e-8 * (1.0 + value.norm()) {
        return Err(Error::IllConditioned(format!(
            "{what} has spurious imaginary part {value}"
        )));
    }
    Ok(value.re)
}

/// Solve both parity systems using transforms from `sys` and recover
/// σ²(n), α(n) from the last coefficients.
pub fn solve_ab(
    ctx: &AnalyticContext,
    spec: &ProcessSpec,
    sys: &KernelSystem,
) -> Result<AbSolution> {
    if (ctx.d() - spec.d()).abs() > 1e-15 {
        return Err(Error::Domain("context and process disagree on d".into()));
    }
    let n = sys.n();
    let reps = inside_representatives(ctx, spec)?;
    let m = reps.len() + 1;
    if sys.count() != m {
        return Err(Error::Domain(format!(
            "kernel system carries {} transforms, need {m}",
            sys.count()
        )));
    }
    let phi = spec.phi();
    let power = (n + 2 * spec.q()) as u32;
    let weights: Vec<(Complex64, Complex64)> = reps
        .iter()
        .map(|&zeta| {
            let w_in = ctx.x_factor(zeta) * phi.eval(zeta);
            let w_out = zeta.powu(power) * ctx.x_factor(zeta.inv()) * phi.eval(zeta.inv());
            (w_in, w_out)
        })
        .collect();

    // X(0)-side scaling: (1/2)σ₀² ∏(-1/z_j) over the original zeros, the
    // appended one contributing -s₀ since z_{q+1} = 1/s₀.
    let mut rhs_last = Complex64::new(0.5 * ctx.sigma0_sq(), 0.0);
    for &z in spec.ma_zeros() {
        rhs_last *= -z.inv();
    }
    if ctx.d() > 0.0 {
        rhs_last *= -ctx.s0().unwrap();
    }

    let s_origin: Vec<Complex64> = (0..m)
        .map(|j| sys.s_value(j, Complex64::new(0.0, 0.0)))
        .collect::<Result<_>>()?;
    let d_origin: Vec<Complex64> = (0..m)
        .map(|j| sys.d_value(j, Complex64::new(0.0, 0.0)))
        .collect::<Result<_>>()?;

    let a_c = solve_parity(
        &reps,
        &weights,
        |j, z| sys.s_value(j, z),
        1.0,
        rhs_last,
        &s_origin,
    )?;
    let b_c = solve_parity(
        &reps,
        &weights,
        |j, z| sys.d_value(j, z),
        -1.0,
        rhs_last,
        &d_origin,
    )?;

    let a: Vec<f64> = a_c
        .iter()
        .enumerate()
        .map(|(j, &v)| real_part_checked(v, &format!("a[{j}]")))
        .collect::<Result<_>>()?;
    let b: Vec<f64> = b_c
        .iter()
        .enumerate()
        .map(|(j, &v)| real_part_checked(v, &format!("b[{j}]")))
        .collect::<Result<_>>()?;
    let a_last = a[m - 1];
    let b_last = b[m - 1];
    let sigma2 = a_last + b_last;
    Ok(AbSolution {
        n,
        a,
        b,
        a_last,
        b_last,
        sigma2,
        alpha: (a_last - b_last) / sigma2,
    })
}

/// First-order laws with everything recombined, for direct comparison
/// against exact prediction output.
#[derive(Debug, Clone, Serialize)]
pub struct PredictedAsymptotics {
    pub n: usize,
    pub sigma2_infinite: f64,
    pub a_last: f64,
    pub b_last: f64,
    pub sigma2: f64,
    pub alpha: f64,
    pub delta: f64,
}

pub fn predicted_asymptotics(spec: &ProcessSpec, n: usize) -> Result<PredictedAsymptotics> {
    let d = spec.d();
    let sigma2 = szego_constants(spec)?.sigma2;
    let nf = n as f64;
    let a_last = 0.5 * sigma2 * (1.0 + d * (1.0 + d) / nf);
    let b_last = 0.5 * sigma2 * (1.0 - d * (1.0 - d) / nf);
    Ok(PredictedAsymptotics {
        n,
        sigma2_infinite: sigma2,
        a_last,
        b_last,
        sigma2: a_last + b_last,
        alpha: (a_last - b_last) / (a_last + b_last),
        delta: a_last + b_last - sigma2,
    })
}

/// One row of the parity convergence table for the moving-average factor
/// θ(z) = 1 + z, whose zero sits on the unit circle. Negative memory keeps
/// the composed density Szegő-regular there, the limit innovation variance
/// stays at σ₀², and the first-order laws alternate by parity:
///
///   α(n) = (d - (-1)ⁿ)/n + O(n⁻²),   δ(n) = σ₀²(d² + 1)/n + O(n⁻²).
#[derive(Debug, Clone, Serialize)]
pub struct ParityRow {
    pub n: usize,
    pub alpha: f64,
    pub sigma2: f64,
    pub n_alpha: f64,
    pub alpha_predicted: f64,
    pub n_delta_over_sigma0: f64,
    pub delta_scale_predicted: f64,
}

/// Exact prediction quantities for θ(z) = 1 + z against the parity laws,
/// at each requested order. Requires d < 0; for d > 0 the unit-circle zero
/// destroys the 1/n laws.
pub fn unit_zero_parity_table(d: f64, orders: &[usize]) -> Result<Vec<ParityRow>> {
    if !(-0.5 < d && d < 0.0) {
        return Err(Error::Domain(format!(
            "parity laws require d in (-1/2, 0), got {d}"
        )));
    }
    let spec = ProcessSpec::new(d, vec![1.0, 1.0], vec![1.0])?;
    let n_max = *orders
        .iter()
        .max()
        .ok_or_else(|| Error::Domain("no orders requested".into()))?;
    let cov = crate::process::arima_covariance(&spec, n_max + 1, 1e-14)?;
    let trace = crate::predictor::levinson_trace(&cov, n_max, crate::predictor::Precision::Double)?;
    let sz = szego_constants(&spec)?;
    let mut rows = Vec::with_capacity(orders.len());
    for &n in orders {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let alpha = trace.alpha(n);
        let sigma2 = trace.sigma2(n);
        rows.push(ParityRow {
            n,
            alpha,
            sigma2,
            n_alpha: nf * alpha,
            alpha_predicted: (d - sign) / nf,
            n_delta_over_sigma0: nf * (sigma2 - sz.sigma2) / sz.sigma0_sq,
            delta_scale_predicted: d * d + 1.0,
        });
    }
    Ok(rows)
}

/// Closed forms for the three inverse-Vandermonde contractions behind the
/// first-order solution of the perturbed systems, with V = V(ζ₁..ζ_m, 0):
/// the (last,last) entry, the sum of the last column, and the product of
/// the last row with u = (1/(ζ_k-1), ..., -1).
pub fn vandermonde_closed_forms(zetas: &[Complex64]) -> (Complex64, Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let mut e_ve = one;
    let mut one_ve = one;
    let mut e_vu = -one;
    for &z in zetas {
        e_ve /= -z;
        one_ve *= (z - 1.0) / z;
        e_vu /= 1.0 - z;
    }
    (e_ve, one_ve, e_vu)
}

/// The same three contractions evaluated from a dense inverse.
pub fn vandermonde_dense_forms(zetas: &[Complex64]) -> Result<(Complex64, Complex64, Complex64)> {
    let m = zetas.len() + 1;
    let mat = nalgebra::DMatrix::<Complex64>::from_fn(m, m, |i, j| {
        if i < m - 1 {
            zetas[i].powu(j as u32)
        } else if j == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let inv = mat
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::IllConditioned("singular Vandermonde matrix".into()))?;
    let e_ve = inv[(m - 1, m - 1)];
    let one_ve = (0..m).map(|i| inv[(i, m - 1)]).sum();
    let mut e_vu = -inv[(m - 1, m - 1)];
    for (k, &z) in zetas.iter().enumerate() {
        e_vu += inv[(m - 1, k)] / (z - 1.0);
    }
    Ok((e_ve, one_ve, e_vu))
}
