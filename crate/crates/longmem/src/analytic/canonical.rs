//! Canonical factorization of the cut phase: the sectionally holomorphic
//! factor X₀ built from η(t) = arg Q⁺(t), the outer factor ψ of the noise
//! density on the unit disk, and the real kernel h that drives the
//! contraction integral equations.
//!
//! All cut integrals run in the variable s = log(1/t), on a fixed composite
//! Gauss-Legendre grid graded toward s = 0 where the phase varies fastest.
//! The grid, the symbol zero s₀, and the Szegő constant are precomputed once
//! per (d, resolution) pair and can be cached on disk as a JSON sidecar.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::ProcessSpec;
use crate::quad::{composite_legendre, graded_edges, Grading};
use crate::spectral::{scaled_fgn_density, szego_constants};

use super::qfun::{eta_at_log, q_zero};

/// Truncation point of the s-integrals; the integrands carry e^{-s} decay,
/// so the discarded tail is below 1e-25.
const S_MAX: f64 = 60.0;

const NODES_PER_PANEL: usize = 32;

/// Default number of phase nodes.
pub const DEFAULT_RESOLUTION: usize = 2048;

/// Precomputed phase grid and derived constants for one memory parameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyticContext {
    d: f64,
    resolution: usize,
    s0: Option<f64>,
    sigma0_sq: f64,
    s_nodes: Vec<f64>,
    s_weights: Vec<f64>,
    eta_values: Vec<f64>,
}

impl AnalyticContext {
    pub fn new(d: f64) -> Result<Self> {
        Self::with_resolution(d, DEFAULT_RESOLUTION)
    }

    pub fn with_resolution(d: f64, resolution: usize) -> Result<Self> {
        let spec = ProcessSpec::fgn(d)?;
        let panels = (resolution / NODES_PER_PANEL).max(2);
        let edges = graded_edges(0.0, S_MAX, Grading::TowardA, panels - 1);
        let rule = composite_legendre(&edges, NODES_PER_PANEL);
        let eta_values = rule.nodes().iter().map(|&s| eta_at_log(d, s)).collect();
        Ok(AnalyticContext {
            d,
            resolution,
            s0: q_zero(d)?,
            sigma0_sq: szego_constants(&spec)?.sigma0_sq,
            s_nodes: rule.nodes().to_vec(),
            s_weights: rule.weights().to_vec(),
            eta_values,
        })
    }

    /// Like [`AnalyticContext::with_resolution`], but consults the directory
    /// named by the `LONGMEM_CACHE` environment variable first and stores a
    /// freshly built context there. Cache problems fall back to building.
    pub fn load_or_build(d: f64, resolution: usize) -> Result<Self> {
        match std::env::var("LONGMEM_CACHE") {
            Ok(dir) if !dir.is_empty() => Self::load_or_build_in(Path::new(&dir), d, resolution),
            _ => Self::with_resolution(d, resolution),
        }
    }

    pub fn load_or_build_in(dir: &Path, d: f64, resolution: usize) -> Result<Self> {
        let path = Self::cache_path(dir, d, resolution);
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(ctx) = serde_json::from_str::<AnalyticContext>(&text) {
                if ctx.d == d && ctx.resolution == resolution && ctx.is_consistent() {
                    return Ok(ctx);
                }
            }
        }
        let ctx = Self::with_resolution(d, resolution)?;
        if std::fs::create_dir_all(dir).is_ok() {
            if let Ok(text) = serde_json::to_string(&ctx) {
                let _ = std::fs::write(&path, text);
            }
        }
        Ok(ctx)
    }

    fn cache_path(dir: &Path, d: f64, resolution: usize) -> PathBuf {
        let key = format!("{d}").replace('-', "m").replace('.', "p");
        dir.join(format!("analytic-d{key}-r{resolution}.json"))
    }

    fn is_consistent(&self) -> bool {
        let n = self.s_nodes.len();
        n > 0
            && self.s_weights.len() == n
            && self.eta_values.len() == n
            && self.s_nodes.iter().all(|s| s.is_finite() && *s > 0.0)
            && self.eta_values.iter().all(|e| e.is_finite())
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Zero of the symbol in (-1, 0); `None` when d < 0.
    pub fn s0(&self) -> Option<f64> {
        self.s0
    }

    /// One-step prediction error of the driving noise alone.
    pub fn sigma0_sq(&self) -> f64 {
        self.sigma0_sq
    }

    /// ∫_0^1 η(τ)/(τ - z) dτ. Off the cut this is the plain quadrature sum;
    /// near and on the cut the phase at Re z is subtracted and restored
    /// through the closed form ∫_0^1 dτ/(τ-z) = Log(1-z) - Log(-z), whose
    /// branch (via the sign of z.im, signed zero included) selects the
    /// correct one-sided limit.
    fn cut_integral(&self, z: Complex64) -> Complex64 {
        let near = z.re > 1e-4 && z.re < 1.0 - 1e-12 && z.im.abs() < 0.1;
        if !near {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..self.s_nodes.len() {
                let tau = (-self.s_nodes[i]).exp();
                acc += self.s_weights[i] * self.eta_values[i] * tau / (tau - z);
            }
            return acc;
        }
        let t = z.re;
        let eta_t = eta_at_log(self.d, -t.ln());
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.s_nodes.len() {
            let tau = (-self.s_nodes[i]).exp();
            let den = tau - z;
            acc += if den.norm() <= 1e-9 * tau {
                // removable point of the difference quotient
                Complex64::new(self.s_weights[i] * -self.eta_log_slope(-t.ln()), 0.0)
            } else {
                self.s_weights[i] * (self.eta_values[i] - eta_t) * tau / den
            };
        }
        let one = Complex64::new(1.0, 0.0);
        acc + eta_t * ((one - z).ln() - (-z).ln())
    }

    /// dη(e^{-s})/ds by central difference.
    fn eta_log_slope(&self, s: f64) -> f64 {
        let h = 1e-3 * s;
        (eta_at_log(self.d, s + h) - eta_at_log(self.d, s - h)) / (2.0 * h)
    }

    /// X₀(z) = exp((1/π) ∫_0^1 η(τ)/(τ-z) dτ). Holomorphic off [0, 1] and
    /// tending to 1 at infinity; on the cut the sign of z.im picks the
    /// one-sided limit.
    pub fn x0(&self, z: Complex64) -> Complex64 {
        (self.cut_integral(z) / PI).exp()
    }

    /// X(z): X₀ with the extra z⁻¹ that compensates the symbol zero pair
    /// when d > 0.
    pub fn x_factor(&self, z: Complex64) -> Complex64 {
        if self.d > 0.0 {
            self.x0(z) / z
        } else {
            self.x0(z)
        }
    }

    /// Both one-sided limits (upper, lower) of X₀ on the cut.
    pub fn x0_boundary(&self, t: f64) -> (Complex64, Complex64) {
        (
            self.x0(Complex64::new(t, 0.0)),
            self.x0(Complex64::new(t, -0.0)),
        )
    }

    /// Outer factor of the noise density on the unit disk,
    /// ψ(z) = exp(-(1/2πi) ∮ log Q(ζ)/(ζ-z) dζ) over the unit circle;
    /// ψ(0) = 2π/σ₀².
    pub fn psi(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 0.95 {
            return Err(Error::Domain(format!(
                "outer factor evaluated too close to the unit circle: |z| = {}",
                z.norm()
            )));
        }
        let d = self.d;
        let rule = composite_legendre(&graded_edges(0.0, PI, Grading::TowardA, 44), 20);
        let integral = rule.integrate_complex(|lambda| {
            let log_f0 = scaled_fgn_density(d, lambda).ln() - 2.0 * d * lambda.ln();
            let zeta = Complex64::from_polar(1.0, lambda);
            log_f0 * (zeta / (zeta - z) + zeta.conj() / (zeta.conj() - z))
        });
        Ok((-integral / (2.0 * PI)).exp())
    }

    /// Δ(t) = (1/π) ∫_0^1 η(τ)/(τ-1/t) dτ - (1/π) PV ∫_0^1 η(τ)/(τ-t) dτ,
    /// assembled as a single integral with the η(t) subtraction so that the
    /// two near-singular parts cancel analytically; Δ(1⁻) = 0.
    pub fn delta_shift(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0 && t < 1.0);
        let s_t = -t.ln();
        let eta_t = eta_at_log(self.d, s_t);
        let spread = 1.0 / t - t;
        let mut acc = 0.0;
        for i in 0..self.s_nodes.len() {
            let tau = (-self.s_nodes[i]).exp();
            acc += if (tau - t).abs() <= 1e-9 * tau {
                self.s_weights[i] * self.eta_log_slope(s_t)
            } else {
                self.s_weights[i] * (self.eta_values[i] - eta_t) * spread * tau
                    / ((tau - 1.0 / t) * (tau - t))
            };
        }
        (acc + eta_t * t.ln()) / PI
    }

    /// The contraction kernel in the cut variable t = e^{-s} ∈ (0, 1):
    ///
    ///   h̃(t) = -(sin η(t)/sin πd) t^{2q + 2·1{d>0}} (φ(1/t)/φ(t)) e^{Δ(t)},
    ///
    /// real valued with h̃(1⁻) = 1.
    pub fn h_tilde(&self, spec: &ProcessSpec, t: f64) -> f64 {
        debug_assert!(t > 0.0 && t < 1.0);
        let eta_t = eta_at_log(self.d, -t.ln());
        let power = 2 * spec.q() as i32 + if self.d > 0.0 { 2 } else { 0 };
        let ar_ratio = spec.phi().eval_real(1.0 / t) / spec.phi().eval_real(t);
        -(eta_t.sin() / (PI * self.d).sin()) * t.powi(power) * ar_ratio * self.delta_shift(t).exp()
    }

    /// h(s) = h̃(e^{-s}) for s ≥ 0, with the limit value 1 at s = 0.
    pub fn h_at(&self, spec: &ProcessSpec, s: f64) -> f64 {
        if s == 0.0 {
            return 1.0;
        }
        self.h_tilde(spec, (-s).exp())
    }
}
