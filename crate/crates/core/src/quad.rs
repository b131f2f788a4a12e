//! Gauss–Legendre rules, panel layouts and an adaptive driver.

use crate::scalar::Real;
use num_traits::Zero;
use std::ops::{Add, Mul};

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Nodes by Newton iteration on the Legendre recurrence, carried out in f64.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule order must be positive");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = T::lit(-x);
            nodes[n - 1 - i] = T::lit(x);
            weights[i] = T::lit(w);
            weights[n - 1 - i] = T::lit(w);
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// (node, weight) pairs mapped to [a, b].
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<V, F>(&self, a: T, b: T, mut f: F) -> V
    where
        V: Zero + Add<Output = V> + Mul<T, Output = V>,
        F: FnMut(T) -> V,
    {
        let mut acc = V::zero();
        for (x, w) in self.mapped(a, b) {
            acc = acc + f(x) * w;
        }
        acc
    }

    /// Per-panel integrals over consecutive breakpoints.
    pub fn panel_values<V, F>(&self, breaks: &[T], mut f: F) -> Vec<V>
    where
        V: Zero + Add<Output = V> + Mul<T, Output = V>,
        F: FnMut(T) -> V,
    {
        breaks
            .windows(2)
            .map(|w| self.integrate(w[0], w[1], &mut f))
            .collect()
    }

    pub fn integrate_panels<V, F>(&self, breaks: &[T], f: F) -> V
    where
        V: Zero + Add<Output = V> + Mul<T, Output = V>,
        F: FnMut(T) -> V,
    {
        self.panel_values(breaks, f)
            .into_iter()
            .fold(V::zero(), |a, b| a + b)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `n` equal panels on [a, b].
pub fn uniform_breaks<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    let n = n.max(1);
    let h = (b - a) / T::from_usize_lossy(n);
    (0..=n)
        .map(|i| {
            if i == n {
                b
            } else {
                a + h * T::from_usize_lossy(i)
            }
        })
        .collect()
}

/// Breakpoints a, a + (b−a)2^{−levels}, …, a + (b−a)/2, b.
pub fn geometric_breaks_toward_start<T: Real>(a: T, b: T, levels: usize) -> Vec<T> {
    let mut out = vec![a];
    let len = b - a;
    for k in (1..=levels).rev() {
        out.push(a + len * T::lit(0.5).powi(k as i32));
    }
    out.push(b);
    out
}

/// Sorted, deduplicated breakpoints on [a, b] including any interior `extra` points.
pub fn with_extra_breaks<T: Real>(a: T, b: T, extra: &[T]) -> Vec<T> {
    let mut pts = vec![a, b];
    pts.extend(extra.iter().copied().filter(|&x| x > a && x < b));
    pts.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
    pts.dedup_by(|x, y| (*x - *y).abs() <= T::epsilon() * (T::one() + y.abs()));
    pts
}

/// Subdivides every panel wider than `max_width`.
pub fn refine_breaks<T: Real>(breaks: &[T], max_width: T) -> Vec<T> {
    let mut out = vec![breaks[0]];
    for w in breaks.windows(2) {
        let len = w[1] - w[0];
        let pieces = (len / max_width).ceil().to_usize().unwrap_or(1).max(1);
        let h = len / T::from_usize_lossy(pieces);
        for i in 1..pieces {
            out.push(w[0] + h * T::from_usize_lossy(i));
        }
        out.push(w[1]);
    }
    out
}

/// Adaptive bisection with a 16-point rule; absolute-or-relative tolerance.
pub fn adaptive<F: FnMut(f64) -> f64>(a: f64, b: f64, tol: f64, mut f: F) -> f64 {
    let gl = GaussLegendre::<f64>::new(16);
    let whole = gl.integrate(a, b, &mut f);
    adaptive_step(&gl, a, b, whole, tol, 0, &mut f)
}

fn adaptive_step<F: FnMut(f64) -> f64>(
    gl: &GaussLegendre<f64>,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    f: &mut F,
) -> f64 {
    let m = 0.5 * (a + b);
    let left = gl.integrate(a, m, &mut *f);
    let right = gl.integrate(m, b, &mut *f);
    let refined = left + right;
    if depth >= 40 || (refined - whole).abs() <= tol.max(1e-15 * refined.abs()) {
        return refined;
    }
    adaptive_step(gl, a, m, left, 0.5 * tol, depth + 1, f)
        + adaptive_step(gl, m, b, right, 0.5 * tol, depth + 1, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 8, 16, 33] {
            let gl = GaussLegendre::<f64>::new(n);
            let s: f64 = gl.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n}: {s}");
        }
    }

    #[test]
    fn f32_rule_integrates_cubic() {
        let gl = GaussLegendre::<f32>::new(4);
        let v: f32 = gl.integrate(0.0, 2.0, |x| x * x * x);
        assert!((v - 4.0).abs() < 1e-5);
    }

    #[test]
    fn adaptive_handles_kinks_and_root_singularity() {
        let v = adaptive(0.0, 1.0, 1e-13, |x| (x - 1.0 / 3.0).abs());
        assert!((v - 5.0 / 18.0).abs() < 1e-12, "{v}");
        let v = adaptive(0.0, 1.0, 1e-13, |x| x.sqrt());
        assert!((v - 2.0 / 3.0).abs() < 1e-11, "{v}");
    }

    #[test]
    fn geometric_breaks_are_increasing() {
        let b = geometric_breaks_toward_start(0.0, 1.0, 10);
        assert_eq!(b.len(), 12);
        assert!(b.windows(2).all(|w| w[1] > w[0]));
    }

    proptest! {
        #[test]
        fn exact_for_polynomials_up_to_degree_2n_minus_1(n in 1usize..20, deg in 0u32..39) {
            prop_assume!(deg < 2 * n as u32);
            let gl = GaussLegendre::<f64>::new(n);
            let v: f64 = gl.integrate(-1.0, 1.0, |x| x.powi(deg as i32));
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            prop_assert!((v - exact).abs() < 1e-13);
        }
    }
}
