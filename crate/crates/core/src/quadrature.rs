//! Numerical integration over the angle space: Gauss-Legendre in `cos(theta)`
//! crossed with uniform trapezoid rules in the two periodic angles.
//!
//! The integrands produced elsewhere in the crate are trigonometric
//! polynomials, so both rules are exact once the orders clear the bandwidth;
//! [`QuadratureSpec::check_capacity`] enforces that instead of silently
//! aliasing.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::{Error, Result};

/// Nodes and weights on `[-1, 1]`, exact for polynomials of degree
/// `2 * order - 1`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            // standard initial guess, then Newton on P_n
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        // ascending order reads better in dumps and keeps summation stable
        let mut paired: Vec<(f64, f64)> = nodes.into_iter().zip(weights).collect();
        paired.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = paired.into_iter().unzip();
        GaussLegendre { nodes, weights }
    }

    /// Shared table per order; root-finding runs once per process.
    pub fn cached(order: usize) -> Arc<GaussLegendre> {
        static TABLES: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
        Arc::clone(
            tables
                .lock()
                .unwrap()
                .entry(order)
                .or_insert_with(|| Arc::new(GaussLegendre::new(order))),
        )
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Summation by recursive halving; error grows like `log n` instead of `n`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
        }
    }
}

/// Product rule over `(theta, phi, beta)` with measure
/// `sin(theta) dtheta dphi dbeta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    /// Gauss-Legendre order in `cos(theta)`.
    pub theta_order: usize,
    /// Uniform points on the `phi` circle.
    pub phi_points: usize,
    /// Uniform points on the `beta` circle.
    pub beta_points: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            theta_order: 32,
            phi_points: 64,
            beta_points: 64,
        }
    }
}

impl QuadratureSpec {
    /// Errors unless the rule integrates exactly: a polynomial of
    /// `theta_degree` in `cos(theta)` needs Gauss order `>= (degree + 1) / 2`
    /// rounded up, and a circle frequency `f` needs strictly more than `f`
    /// uniform points.
    pub fn check_capacity(
        &self,
        theta_degree: usize,
        phi_freq: usize,
        beta_freq: usize,
    ) -> Result<()> {
        let need_theta = theta_degree / 2 + 1;
        if self.theta_order >= need_theta
            && self.phi_points > phi_freq
            && self.beta_points > beta_freq
        {
            Ok(())
        } else {
            Err(Error::QuadratureInsufficient {
                need_theta,
                need_phi: phi_freq,
                need_beta: beta_freq,
                got_theta: self.theta_order,
                got_phi: self.phi_points,
                got_beta: self.beta_points,
            })
        }
    }

    /// Integrates `f(theta, phi, beta)` by the full product rule. Plain node
    /// loop kept deliberately naive: it cross-checks the factored paths used
    /// on hot paths elsewhere.
    pub fn integrate<F>(&self, mut f: F) -> Complex64
    where
        F: FnMut(f64, f64, f64) -> Complex64,
    {
        let gl = GaussLegendre::cached(self.theta_order);
        let dphi = 2.0 * PI / self.phi_points as f64;
        let dbeta = 2.0 * PI / self.beta_points as f64;
        let mut samples =
            Vec::with_capacity(self.theta_order * self.phi_points * self.beta_points);
        for (u, w) in gl.nodes().iter().zip(gl.weights()) {
            let theta = u.acos();
            for jp in 0..self.phi_points {
                let phi = dphi * jp as f64;
                for jb in 0..self.beta_points {
                    let beta = dbeta * jb as f64;
                    samples.push(f(theta, phi, beta) * (w * dphi * dbeta));
                }
            }
        }
        pairwise_sum_complex(&samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_weights_match_known_order_three() {
        let gl = GaussLegendre::new(3);
        let expect_nodes = [-(0.6f64).sqrt(), 0.0, (0.6f64).sqrt()];
        let expect_weights = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
        for i in 0..3 {
            assert!((gl.nodes()[i] - expect_nodes[i]).abs() < 1e-14);
            assert!((gl.weights()[i] - expect_weights[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        let gl = GaussLegendre::new(8);
        // int_{-1}^{1} x^k dx
        for k in 0..=15usize {
            let s: f64 = gl
                .nodes()
                .iter()
                .zip(gl.weights())
                .map(|(x, w)| w * x.powi(k as i32))
                .sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((s - exact).abs() < 1e-13, "degree {k}: {s} vs {exact}");
        }
    }

    #[test]
    fn volume_of_angle_space() {
        let spec = QuadratureSpec {
            theta_order: 4,
            phi_points: 4,
            beta_points: 4,
        };
        let v = spec.integrate(|_, _, _| Complex64::new(1.0, 0.0));
        let expect = 8.0 * PI * PI;
        assert!((v.re - expect).abs() < 1e-10);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn circle_rule_kills_low_frequencies_only() {
        let spec = QuadratureSpec {
            theta_order: 4,
            phi_points: 8,
            beta_points: 4,
        };
        // e^{i 5 phi} integrates to zero with 8 points
        let v = spec.integrate(|_, phi, _| Complex64::new(0.0, 5.0 * phi).exp());
        assert!(v.norm() < 1e-10);
        // e^{i 8 phi} aliases to the constant: the rule must refuse it
        assert!(spec.check_capacity(0, 8, 0).is_err());
        assert!(spec.check_capacity(7, 7, 3).is_ok());
        assert!(spec.check_capacity(9, 0, 0).is_err());
    }

    #[test]
    fn pairwise_sum_matches_naive_on_benign_data() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-9);
    }
}
