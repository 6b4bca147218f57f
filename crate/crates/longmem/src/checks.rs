//! The acceptance gate: every first-order law, closed-form constant, and
//! cross-route identity the library claims, checked at desk scale against
//! fixed tolerances. The asymptotic statements are limits, so each check
//! verifies a convergence property (bound at checkpoints plus shrink of the
//! envelope), not equality. Both the test gate and the command-line `all`
//! subcommand run this list; a check never panics, it reports.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::analytic::{q_fun, AnalyticContext};
use crate::asympt::{
    solve_ab, unit_zero_parity_table, vandermonde_closed_forms, vandermonde_dense_forms,
};
use crate::error::Result;
use crate::hilbert_verify::hilbert_report;
use crate::inteq::{constants_report, KernelSystem, SolveMethod};
use crate::predictor::{levinson_trace, Precision};
use crate::process::{arima_covariance, fgn_covariance, ProcessSpec};
use crate::spectral::{fgn_density, szego_constants};

/// Outcome of one acceptance check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Timing wrapper: errors become failures, a budget overrun fails the check
/// even when every tolerance held.
fn run_check(
    id: usize,
    name: &'static str,
    budget: Option<f64>,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CheckResult {
    let start = Instant::now();
    let outcome = body();
    let seconds = start.elapsed().as_secs_f64();
    let (mut pass, mut detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(cap) = budget {
        if seconds >= cap {
            pass = false;
            detail.push_str(&format!("; runtime {seconds:.1}s exceeds budget {cap}s"));
        }
    }
    CheckResult {
        id,
        name,
        pass,
        detail,
        seconds,
    }
}

/// n·α(n) → d for pure fGn, both memory signs: bound 8/n at n ∈
/// {2¹⁰, 2¹², 2¹⁴} and the envelope shrinking at least 3× per 4× n.
pub fn partial_correlation_law() -> CheckResult {
    run_check(1, "partial correlation law n*alpha -> d", Some(30.0), || {
        let mut pass = true;
        let mut parts = Vec::new();
        for d in [-0.25, 0.25] {
            let n_max = 1usize << 14;
            let cov = fgn_covariance(d, n_max + 1)?;
            let trace = levinson_trace(&cov, n_max, Precision::Double)?;
            let mut prev = f64::INFINITY;
            for k in [10u32, 12, 14] {
                let n = 1usize << k;
                let nf = n as f64;
                let e = (nf * trace.alpha(n) - d).abs();
                if e > 8.0 / nf || e > prev / 3.0 {
                    pass = false;
                }
                parts.push(format!("d={d} n=2^{k}: |n*alpha-d|={e:.2e} (cap {:.2e})", 8.0 / nf));
                prev = e;
            }
        }
        Ok((pass, parts.join(", ")))
    })
}

/// n·δ(n)/σ₀² → d² on the same runs, δ(n) = σ²(n) − σ² with the limit taken
/// from the spectral side.
pub fn relative_error_law() -> CheckResult {
    run_check(2, "innovation error law n*delta/sigma0^2 -> d^2", None, || {
        let mut pass = true;
        let mut parts = Vec::new();
        for d in [-0.25, 0.25] {
            let spec = ProcessSpec::fgn(d)?;
            let sz = szego_constants(&spec)?;
            let n_max = 1usize << 14;
            let cov = fgn_covariance(d, n_max + 1)?;
            let trace = levinson_trace(&cov, n_max, Precision::Double)?;
            for k in [10u32, 12, 14] {
                let n = 1usize << k;
                let nf = n as f64;
                let e = (nf * (trace.sigma2(n) - sz.sigma2) / sz.sigma0_sq - d * d).abs();
                if e > 8.0 / nf {
                    pass = false;
                }
                parts.push(format!("d={d} n=2^{k}: {e:.2e}"));
            }
        }
        Ok((pass, parts.join(", ")))
    })
}

/// ARMA filters leave the first-order laws alone except through the inside
/// zeros of θ: outside zeros keep the fGn scaling, a zero at 0.5 multiplies
/// the δ-law by 4.
pub fn filter_invariance() -> CheckResult {
    run_check(3, "filter invariance of the first-order laws", None, || {
        let d = 0.25;
        let n = 1usize << 13;
        let nf = n as f64;
        let mut pass = true;
        let mut parts = Vec::new();

        let outside = ProcessSpec::new(d, vec![1.0, 0.5], vec![1.0, -0.4])?;
        let cov = arima_covariance(&outside, n + 1, 1e-14)?;
        let trace = levinson_trace(&cov, n, Precision::Double)?;
        let e_alpha = (nf * trace.alpha(n) - d).abs();
        let sz = szego_constants(&outside)?;
        let scale = nf * (trace.sigma2(n) - sz.sigma2) / (sz.sigma0_sq * d * d);
        if e_alpha > 0.02 || (scale - 1.0).abs() > 0.1 {
            pass = false;
        }
        parts.push(format!(
            "zero outside: |n*alpha-d|={e_alpha:.2e}, delta scale {scale:.4} vs 1"
        ));

        let inside = ProcessSpec::new(d, vec![1.0, -2.0], vec![1.0])?;
        let cov = arima_covariance(&inside, n + 1, 1e-14)?;
        let trace = levinson_trace(&cov, n, Precision::Double)?;
        let sz = szego_constants(&inside)?;
        let scale = nf * (trace.sigma2(n) - sz.sigma2) / (sz.sigma0_sq * d * d);
        if (scale / 4.0 - 1.0).abs() > 0.1 {
            pass = false;
        }
        parts.push(format!("zero at 0.5: delta scale {scale:.4} vs 4"));
        Ok((pass, parts.join("; ")))
    })
}

/// The polylog extension restricts to the fractional density on the circle:
/// |Q(e^{iλ}) − f₀(λ)| < 1e−8·f₀ over 50 frequencies per memory value.
pub fn circle_restriction() -> CheckResult {
    run_check(4, "circle restriction Q(e^{i*lambda}) = f0(lambda)", Some(5.0), || {
        let mut worst = 0.0f64;
        for d in [0.25, -0.25, 0.4, -0.4] {
            for i in 1..=50 {
                let lambda = PI * i as f64 / 50.0;
                let q = q_fun(d, Complex64::from_polar(1.0, lambda));
                let f = fgn_density(d, lambda);
                worst = worst.max((q - Complex64::new(f, 0.0)).norm() / f);
            }
        }
        Ok((worst < 1e-8, format!("max relative error {worst:.2e} over 4 x 50 points")))
    })
}

/// λ₀ = πd(1+d)/sin πd and μ₀ = πd(1−d)/sin πd from the solved integral
/// equations, 1e−4 relative across the d range.
pub fn closed_constants() -> CheckResult {
    run_check(5, "closed forms of the kernel moments", Some(10.0), || {
        let mut pass = true;
        let mut parts = Vec::new();
        for d in [0.1, -0.1, 0.25, -0.25, 0.4, -0.4] {
            let report = constants_report(d)?;
            if report.rel_err >= 1e-4 {
                pass = false;
            }
            parts.push(format!("d={d}: {:.1e}", report.rel_err));
        }
        Ok((pass, parts.join(", ")))
    })
}

/// X₀ = ψQ·z/(z−s₀) for d > 0 and X₀ = ψQ for d < 0 at interior points,
/// plus ψ(0)·σ₀² = 2π against the independent spectral constant.
pub fn factorization_identity() -> CheckResult {
    run_check(6, "canonical factor equals outer part times extension", None, || {
        let mut pass = true;
        let mut parts = Vec::new();
        for d in [0.25, -0.25] {
            let ctx = AnalyticContext::load_or_build(d, 512)?;
            let sz = szego_constants(&ProcessSpec::fgn(d)?)?;
            let psi0 = ctx.psi(Complex64::new(0.0, 0.0))?;
            let psi_err = (psi0 * sz.sigma0_sq / TAU - 1.0).norm();
            let mut worst = 0.0f64;
            for k in 0..10 {
                let theta = 0.3 + TAU * k as f64 / 10.0;
                let r = if k % 2 == 0 { 0.5 } else { 0.2 };
                let z = Complex64::from_polar(r, theta);
                let lhs = ctx.x0(z);
                let mut rhs = ctx.psi(z)? * q_fun(d, z);
                if let Some(s0) = ctx.s0() {
                    rhs *= z / (z - s0);
                }
                worst = worst.max((lhs - rhs).norm() / lhs.norm());
            }
            if worst >= 1e-6 || psi_err >= 1e-6 {
                pass = false;
            }
            parts.push(format!("d={d}: product {worst:.1e}, psi(0) {psi_err:.1e}"));
        }
        Ok((pass, parts.join("; ")))
    })
}

/// n(S_{0,n}(−1) − 1) → −d(1+d)/2 as the damping index grows.
pub fn transform_expansion() -> CheckResult {
    run_check(7, "first-order expansion of the damped transform", None, || {
        let d = 0.25;
        let ctx = AnalyticContext::load_or_build(d, 512)?;
        let spec = ProcessSpec::fgn(d)?;
        let target = -d * (1.0 + d) / 2.0;
        let z = Complex64::new(-1.0, 0.0);
        let mut errs = Vec::new();
        for n in [128usize, 256, 512, 1024] {
            let sys = KernelSystem::solve(&ctx, &spec, n)?;
            let v = (sys.s_value(0, z)? - Complex64::new(1.0, 0.0)) * n as f64;
            errs.push((v.re - target).abs().max(v.im.abs()));
        }
        let pass = *errs.last().unwrap() < 2e-3 && errs.last().unwrap() < errs.first().unwrap();
        let shown: Vec<String> = errs.iter().map(|e| format!("{e:.1e}")).collect();
        Ok((pass, format!("errors toward {target}: {}", shown.join(" -> "))))
    })
}

/// The recombined parity solutions reproduce exact prediction: a+b matches
/// σ²(n) within 0.5% and (a−b)/(a+b) matches α(n) within 5% at n = 256.
pub fn bridge_recombination() -> CheckResult {
    run_check(8, "parity systems recombine to exact prediction", None, || {
        let n = 256usize;
        let mut pass = true;
        let mut parts = Vec::new();
        for d in [-0.25, 0.25] {
            let spec = ProcessSpec::fgn(d)?;
            let ctx = AnalyticContext::load_or_build(d, 1024)?;
            let sys = KernelSystem::solve(&ctx, &spec, n)?;
            let sol = solve_ab(&ctx, &spec, &sys)?;
            let cov = fgn_covariance(d, n + 1)?;
            let trace = levinson_trace(&cov, n, Precision::Double)?;
            let s_rel = (sol.sigma2 / trace.sigma2(n) - 1.0).abs();
            let a_rel = (sol.alpha / trace.alpha(n) - 1.0).abs();
            if s_rel >= 0.005 || a_rel >= 0.05 {
                pass = false;
            }
            parts.push(format!("d={d}: sigma2 {s_rel:.2e}, alpha {a_rel:.2e}"));
        }
        Ok((pass, parts.join("; ")))
    })
}

/// Scaled deviations of the last parity coefficients approach d(1±d):
/// within 10% at n = 1024 and closer still at n = 2048.
pub fn second_order_coefficients() -> CheckResult {
    run_check(9, "second-order coefficients of the parity solutions", None, || {
        let mut pass = true;
        let mut parts = Vec::new();
        for d in [0.25, -0.25] {
            let spec = ProcessSpec::fgn(d)?;
            let ctx = AnalyticContext::load_or_build(d, 1024)?;
            let sigma2 = szego_constants(&spec)?.sigma2;
            let a_target = d * (1.0 + d);
            let b_target = d * (1.0 - d);
            let mut prev = f64::INFINITY;
            for n in [1024usize, 2048] {
                // the damped kernel concentrates at s ~ 1/n; the default
                // grading depth leaves a quadrature floor near 5e-4 at these
                // n, so grade deeper to keep the improvement visible
                let sys = KernelSystem::solve_with(&ctx, &spec, n, 23, SolveMethod::DenseLu)?;
                let sol = solve_ab(&ctx, &spec, &sys)?;
                let nf = n as f64;
                let a_rel = (nf * (sol.a_last / (sigma2 / 2.0) - 1.0) / a_target - 1.0).abs();
                let b_rel = (nf * (1.0 - sol.b_last / (sigma2 / 2.0)) / b_target - 1.0).abs();
                let worst = a_rel.max(b_rel);
                if (n == 1024 && worst > 0.1) || worst >= prev {
                    pass = false;
                }
                parts.push(format!("d={d} n={n}: a {a_rel:.1e}, b {b_rel:.1e}"));
                prev = worst;
            }
        }
        Ok((pass, parts.join("; ")))
    })
}

/// Closed Vandermonde contractions against dense inversion, 1e−10 over 100
/// random node configurations of sizes 1..=6.
pub fn vandermonde_identities() -> CheckResult {
    run_check(10, "closed Vandermonde contractions vs dense inverse", None, || {
        let mut rng = StdRng::seed_from_u64(0x0a11ce);
        let mut worst = 0.0f64;
        for i in 0..100 {
            let size = i % 6 + 1;
            let zetas: Vec<Complex64> = (0..size)
                .map(|_| {
                    Complex64::from_polar(
                        rng.gen_range(0.1..0.95),
                        rng.gen_range(0.3..TAU - 0.3),
                    )
                })
                .collect();
            let closed = vandermonde_closed_forms(&zetas);
            let dense = vandermonde_dense_forms(&zetas)?;
            for (c, v) in [(closed.0, dense.0), (closed.1, dense.1), (closed.2, dense.2)] {
                worst = worst.max((c - v).norm() / c.norm().max(1e-300));
            }
        }
        Ok((worst < 1e-10, format!("max relative deviation {worst:.2e} over 100 configurations")))
    })
}

/// The tail generating functions satisfy the boundary problem at n = 32:
/// continuity across the circle, the jump relation on the cut, and the
/// origin scaling limit.
pub fn hilbert_conditions() -> CheckResult {
    run_check(11, "boundary problem conditions at finite n", None, || {
        let mut pass = true;
        let mut parts = Vec::new();
        for d in [0.25, -0.25] {
            let report = hilbert_report(&ProcessSpec::fgn(d)?, 32)?;
            let worst_boundary = report
                .boundary_residuals
                .iter()
                .map(|&(_, r)| r)
                .fold(0.0f64, f64::max);
            if !(report.continuity_pass && report.boundary_pass && report.scaling_pass) {
                pass = false;
            }
            parts.push(format!(
                "d={d}: continuity {:.1e}, boundary {worst_boundary:.1e}, scaling {:.1e}/{:.1e}",
                report.circle_continuity, report.scaling_rel_err, report.scaling_phi1_rel
            ));
        }
        Ok((pass, parts.join("; ")))
    })
}

/// θ(z) = 1 + z with negative memory: the laws split by parity,
/// n·α(n) → d − (−1)ⁿ and n·δ(n)/σ₀² → d² + 1.
pub fn unit_zero_parity() -> CheckResult {
    run_check(12, "parity-split laws for the unit-circle zero", None, || {
        let rows = unit_zero_parity_table(-0.25, &[1 << 10, 1 << 12])?;
        let mut pass = true;
        let mut parts = Vec::new();
        for row in &rows {
            let nf = row.n as f64;
            let e = (row.n_alpha - nf * row.alpha_predicted).abs();
            if e > 8.0 / nf {
                pass = false;
            }
            parts.push(format!("n={}: |n*alpha-pred|={e:.2e}", row.n));
        }
        let last = rows.last().unwrap();
        let off = (last.n_delta_over_sigma0 / last.delta_scale_predicted - 1.0).abs();
        if off > 0.05 {
            pass = false;
        }
        parts.push(format!(
            "n*delta/sigma0^2 off {off:.2e} from {}",
            last.delta_scale_predicted
        ));
        Ok((pass, parts.join(", ")))
    })
}

/// The damped kernel operator contracts: ‖A_n f‖/‖f‖ ≤ ½ + ½|sin πd| on
/// random grid functions, every test memory value.
pub fn contraction_property() -> CheckResult {
    run_check(13, "contraction bound of the kernel operator", None, || {
        let mut rng = StdRng::seed_from_u64(0xc0ffee);
        let mut pass = true;
        let mut parts = Vec::new();
        for d in [0.1, -0.1, 0.25, -0.25, 0.4, -0.4] {
            let ctx = AnalyticContext::load_or_build(d, 512)?;
            let spec = ProcessSpec::fgn(d)?;
            let sys = KernelSystem::solve(&ctx, &spec, 64)?;
            let allowed = 0.5 + 0.5 * (PI * d).sin().abs();
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let f: Vec<f64> = (0..sys.nodes().len())
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect();
                worst = worst.max(sys.grid_norm(&sys.apply(&f)) / sys.grid_norm(&f));
            }
            if worst > allowed || sys.contraction_bound() > allowed {
                pass = false;
            }
            parts.push(format!("d={d}: {worst:.3} <= {allowed:.3}"));
        }
        Ok((pass, parts.join(", ")))
    })
}

/// All checks in dependency order: prediction laws first, then the spectral
/// and analytic identities they rest on, then the reconstruction routes,
/// finally the boundary-problem diagnostics.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        partial_correlation_law(),
        relative_error_law(),
        filter_invariance(),
        circle_restriction(),
        closed_constants(),
        factorization_identity(),
        transform_expansion(),
        bridge_recombination(),
        second_order_coefficients(),
        vandermonde_identities(),
        hilbert_conditions(),
        unit_zero_parity(),
        contraction_property(),
    ]
}
