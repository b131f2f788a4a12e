//! Gauss–Hermite rules by Golub–Welsch with Newton polishing.

use super::basis::normalized_hermite;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights for `∫ g(x) e^{−x²} dx`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `w_i e^{x_i²}`, the weights for `∫ g(x) dx` with `g e^{x²}` polynomial-like.
    pub unit_weights: Vec<f64>,
    /// `ln w_i`, finite where `w_i` underflows.
    pub ln_weights: Vec<f64>,
    /// Largest `|K_n(x_i)|` relative to the local polynomial scale after polishing.
    pub residual: f64,
}

impl GaussHermite {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 600 {
            return Err(Error::Input(format!(
                "Gauss–Hermite order {n} outside 1..=600"
            )));
        }
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let b = (k as f64 / 2.0).sqrt();
            jacobi[(k, k - 1)] = b;
            jacobi[(k - 1, k)] = b;
        }
        let eig = SymmetricEigen::new(jacobi);
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        // Symmetrize, then polish each node with Newton on K_n, K_n' = √(2n) K_{n−1}.
        for i in 0..n / 2 {
            let v = 0.5 * (nodes[n - 1 - i] - nodes[i]);
            nodes[i] = -v;
            nodes[n - 1 - i] = v;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        let mut residual: f64 = 0.0;
        let mut weights = Vec::with_capacity(n);
        let mut unit_weights = Vec::with_capacity(n);
        let mut ln_weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (k, _) = normalized_hermite(*x, n);
                let d = (2.0 * n as f64).sqrt() * k[n - 1];
                if d == 0.0 {
                    break;
                }
                *x -= k[n] / d;
            }
            let (k, ln_scale) = normalized_hermite(*x, n);
            let scale = k[..n].iter().map(|v| v.abs()).fold(0.0, f64::max);
            residual = residual.max(k[n].abs() / scale);
            let s: f64 = k[..n].iter().map(|v| v * v).sum();
            // Christoffel numbers: w = 1 / Σ K_j(x)², with K stored as k·e^{ln_scale}.
            let ln_w = -(s.ln() + 2.0 * ln_scale);
            ln_weights.push(ln_w);
            weights.push(ln_w.exp());
            unit_weights.push((ln_w + *x * *x).exp());
        }
        Ok(Self {
            nodes,
            weights,
            unit_weights,
            ln_weights,
            residual,
        })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .collect();
        crate::sum::pairwise(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_and_residuals() {
        let gh = GaussHermite::new(20).unwrap();
        let pi = std::f64::consts::PI;
        assert!((gh.integrate(|_| 1.0) - pi.sqrt()).abs() < 1e-14);
        assert!((gh.integrate(|x| x * x) - pi.sqrt() / 2.0).abs() < 1e-14);
        assert!((gh.integrate(|x| x.powi(6)) - 15.0 * pi.sqrt() / 8.0).abs() < 1e-13);
        assert!(gh.integrate(|x| x.powi(7)).abs() < 1e-14);
        assert!(gh.residual < 1e-10);
        let big = GaussHermite::new(300).unwrap();
        assert!(big.residual < 1e-10);
        assert!((big.integrate(|_| 1.0) - pi.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn known_two_point_rule() {
        let gh = GaussHermite::new(2).unwrap();
        assert!((gh.nodes[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((gh.weights[0] - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-15);
    }
}
