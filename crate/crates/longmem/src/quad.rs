//! Composite Gauss quadrature on panel decompositions.
//!
//! Integrands in this crate are analytic inside their domains but frequently
//! singular at an endpoint (logarithmically or algebraically) or nearly
//! singular next to a pole just off the domain. Two tools cover all of that:
//!
//! * geometrically graded panels with a fixed-order Gauss–Legendre rule per
//!   panel, which converge fast for anything analytic on each open panel and
//!   integrable at the endpoint;
//! * Gauss–Jacobi rules that absorb an algebraic endpoint weight exactly.

use gauss_quad::{GaussJacobi, GaussLegendre};
use num_complex::Complex64;

/// Nodes and weights of a quadrature rule over a union of intervals.
#[derive(Debug, Clone)]
pub struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Self {
        assert_eq!(nodes.len(), weights.len());
        Rule { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }

    /// Appends another rule's points to this one.
    pub fn extend(&mut self, other: Rule) {
        self.nodes.extend(other.nodes);
        self.weights.extend(other.weights);
    }
}

/// Gauss–Legendre rule with `n` nodes mapped to the interval `[a, b]`.
pub fn gauss_legendre_panel(a: f64, b: f64, n: usize) -> Rule {
    let gl = GaussLegendre::new(n.max(2)).expect("Gauss-Legendre degree >= 2");
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &(x, w) in gl.as_node_weight_pairs() {
        nodes.push(mid + half * x);
        weights.push(half * w);
    }
    Rule { nodes, weights }
}

/// Gauss–Jacobi rule with `n` nodes on `[a, b]` against the weight
/// `(b - x)^alpha (x - a)^beta`; `integrate(f)` then approximates
/// `∫ (b-x)^alpha (x-a)^beta f(x) dx`.
pub fn gauss_jacobi_panel(a: f64, b: f64, alpha: f64, beta: f64, n: usize) -> Rule {
    let gj = GaussJacobi::new(n.max(2), alpha, beta).expect("valid Gauss-Jacobi parameters");
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    // x = mid + half*u maps [-1,1] -> [a,b]; the weight picks up
    // (b-x)^alpha (x-a)^beta = half^(alpha+beta) (1-u)^alpha (1+u)^beta.
    let scale = half * half.powf(alpha + beta);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &(u, w) in gj.as_node_weight_pairs() {
        nodes.push(mid + half * u);
        weights.push(scale * w);
    }
    Rule { nodes, weights }
}

/// Which endpoint(s) of an interval the panel decomposition should crowd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    TowardA,
    TowardB,
    Both,
}

/// Levels capped so the innermost panel stays thousands of ulps wide; any
/// deeper and quadrature nodes round onto the graded endpoint itself.
/// A zero endpoint imposes no cap (f64 stays dense all the way down).
fn representable_levels(graded_endpoint: f64, len: f64, levels: usize) -> usize {
    let min_width = 2048.0 * f64::EPSILON * graded_endpoint.abs();
    if min_width == 0.0 {
        return levels;
    }
    let max_levels = (len.abs() / min_width).log2();
    if max_levels <= 0.0 {
        0
    } else {
        levels.min(max_levels as usize)
    }
}

/// Panel edges on `[a, b]`, geometrically refined toward the requested
/// endpoint(s) by `levels` halvings. The innermost stub panel touches the
/// endpoint, so integrands must be integrable there.
pub fn graded_edges(a: f64, b: f64, grading: Grading, levels: usize) -> Vec<f64> {
    match grading {
        Grading::TowardA => {
            let levels = representable_levels(a, b - a, levels);
            let mut edges = Vec::with_capacity(levels + 2);
            edges.push(a);
            for j in (0..=levels).rev() {
                edges.push(a + (b - a) * 0.5f64.powi(j as i32));
            }
            edges
        }
        Grading::TowardB => {
            let mut edges = graded_edges(b, a, Grading::TowardA, levels);
            edges.reverse();
            edges
        }
        Grading::Both => {
            let mid = 0.5 * (a + b);
            let mut edges = graded_edges(a, mid, Grading::TowardA, levels);
            let right = graded_edges(mid, b, Grading::TowardB, levels);
            edges.extend(right.into_iter().skip(1));
            edges
        }
    }
}

/// Uniform panel edges with `m` panels.
pub fn uniform_edges(a: f64, b: f64, m: usize) -> Vec<f64> {
    let m = m.max(1);
    (0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect()
}

/// Composite Gauss–Legendre rule over consecutive panels given by `edges`.
pub fn composite_legendre(edges: &[f64], nodes_per_panel: usize) -> Rule {
    let mut rule = Rule::new(Vec::new(), Vec::new());
    for pair in edges.windows(2) {
        rule.extend(gauss_legendre_panel(pair[0], pair[1], nodes_per_panel));
    }
    rule
}

/// Composite rule on `[a, b]` graded toward singular interior/endpoint
/// points. Each point in `singular` gets geometric refinement from both
/// sides (or one side if it is an endpoint).
pub fn composite_graded_around(
    a: f64,
    b: f64,
    singular: &[f64],
    levels: usize,
    nodes_per_panel: usize,
) -> Rule {
    let mut cuts: Vec<f64> = singular
        .iter()
        .copied()
        .filter(|&s| s >= a && s <= b)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();

    if cuts.is_empty() {
        return composite_legendre(&uniform_edges(a, b, 8), nodes_per_panel);
    }

    let mut rule = Rule::new(Vec::new(), Vec::new());
    let mut left = a;
    let mut graded_left = cuts[0] == a;
    for &s in &cuts {
        if s > left {
            let grading = if graded_left {
                Grading::Both
            } else {
                Grading::TowardB
            };
            rule.extend(composite_legendre(
                &graded_edges(left, s, grading, levels),
                nodes_per_panel,
            ));
        }
        graded_left = true;
        left = s;
    }
    if left < b {
        rule.extend(composite_legendre(
            &graded_edges(left, b, Grading::TowardA, levels),
            nodes_per_panel,
        ));
    }
    rule
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn panel_rule_integrates_polynomials_exactly() {
        let rule = gauss_legendre_panel(0.0, 2.0, 8);
        let got = rule.integrate(|x| 3.0 * x * x);
        assert_relative_eq!(got, 8.0, max_relative = 1e-14);
    }

    #[test]
    fn graded_panels_handle_log_singularity() {
        // ∫_0^1 ln(x) dx = -1.
        let edges = graded_edges(0.0, 1.0, Grading::TowardA, 48);
        let rule = composite_legendre(&edges, 16);
        let got = rule.integrate(|x| x.ln());
        assert_relative_eq!(got, -1.0, max_relative = 1e-13);
    }

    #[test]
    fn jacobi_rule_absorbs_algebraic_weight() {
        // ∫_0^1 x^(-0.75) (1-x)^(-0.75) dx = B(1/4, 1/4).
        let rule = gauss_jacobi_panel(0.0, 1.0, -0.75, -0.75, 64);
        let got = rule.integrate(|_| 1.0);
        let expected = statrs::function::beta::beta(0.25, 0.25);
        assert_relative_eq!(got, expected, max_relative = 1e-12);
    }

    #[test]
    fn graded_both_ends() {
        // ∫_0^1 ln(x) ln(1-x) dx = 2 - pi^2/6. The stub panel at x = 1 is
        // width-limited by f64 resolution, which caps the accuracy here.
        let edges = graded_edges(0.0, 1.0, Grading::Both, 48);
        let rule = composite_legendre(&edges, 16);
        let got = rule.integrate(|x| x.ln() * (1.0 - x).ln());
        let expected = 2.0 - std::f64::consts::PI.powi(2) / 6.0;
        assert_relative_eq!(got, expected, max_relative = 1e-10);
    }

    #[test]
    fn graded_around_interior_point() {
        // ∫_0^2 ln|x-1| dx = -2.
        let rule = composite_graded_around(0.0, 2.0, &[1.0], 48, 16);
        let got = rule.integrate(|x| (x - 1.0).abs().ln());
        assert_relative_eq!(got, -2.0, max_relative = 1e-10);
    }
}
