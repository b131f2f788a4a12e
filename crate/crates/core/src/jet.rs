//! Truncated Taylor series for exact derivatives of catalog functions.
//!
//! A `Jet<N>` holds `f(x₀), f'(x₀), f''(x₀)/2!, …` up to order `N − 1`.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<const N: usize>(pub [Complex64; N]);

impl<const N: usize> Jet<N> {
    pub fn constant(c: Complex64) -> Self {
        let mut a = [Complex64::new(0.0, 0.0); N];
        a[0] = c;
        Self(a)
    }

    pub fn real(c: f64) -> Self {
        Self::constant(Complex64::new(c, 0.0))
    }

    /// The independent variable at `x`.
    pub fn var(x: f64) -> Self {
        let mut j = Self::real(x);
        if N > 1 {
            j.0[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    pub fn value(&self) -> Complex64 {
        self.0[0]
    }

    /// `k`-th derivative, `k < N`.
    pub fn derivative(&self, k: usize) -> Complex64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.0[k] * fact
    }

    pub fn scale(self, c: Complex64) -> Self {
        Self(self.0.map(|a| a * c))
    }

    pub fn exp(self) -> Self {
        let a = &self.0;
        let mut b = [Complex64::new(0.0, 0.0); N];
        b[0] = a[0].exp();
        for k in 1..N {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                s += a[j] * b[k - j] * j as f64;
            }
            b[k] = s / k as f64;
        }
        Self(b)
    }

    pub fn ln(self) -> Self {
        let a = &self.0;
        let mut b = [Complex64::new(0.0, 0.0); N];
        b[0] = a[0].ln();
        for k in 1..N {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 1..k {
                s += b[j] * a[k - j] * j as f64;
            }
            b[k] = (a[k] - s / k as f64) / a[0];
        }
        Self(b)
    }

    /// `self^p` for a base whose value is off the branch cut.
    pub fn powf(self, p: f64) -> Self {
        (self.ln().scale(Complex64::new(p, 0.0))).exp()
    }

    pub fn powi(self, p: u32) -> Self {
        let mut out = Self::real(1.0);
        for _ in 0..p {
            out = out * self;
        }
        out
    }

    pub fn sin(self) -> Self {
        let i = Complex64::new(0.0, 1.0);
        let e = self.scale(i).exp();
        let f = self.scale(-i).exp();
        (e - f).scale(Complex64::new(0.0, -0.5))
    }

    pub fn cos(self) -> Self {
        let i = Complex64::new(0.0, 1.0);
        let e = self.scale(i).exp();
        let f = self.scale(-i).exp();
        (e + f).scale(Complex64::new(0.5, 0.0))
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(o.0) {
            *x += y;
        }
        Self(a)
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|a| -a))
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut c = [Complex64::new(0.0, 0.0); N];
        for k in 0..N {
            for j in 0..=k {
                c[k] += self.0[j] * o.0[k - j];
            }
        }
        Self(c)
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let mut c = [Complex64::new(0.0, 0.0); N];
        for k in 0..N {
            let mut s = self.0[k];
            for j in 1..=k {
                s -= o.0[j] * c[k - j];
            }
            c[k] = s / o.0[0];
        }
        Self(c)
    }
}

impl<const N: usize> Add<f64> for Jet<N> {
    type Output = Self;
    fn add(self, o: f64) -> Self {
        self + Self::real(o)
    }
}

impl<const N: usize> Mul<f64> for Jet<N> {
    type Output = Self;
    fn mul(self, o: f64) -> Self {
        self.scale(Complex64::new(o, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_derivatives() {
        let x = 0.7;
        let j: Jet<5> = (Jet::var(x) * Jet::var(x) * -0.5).exp();
        let g = (-x * x / 2.0).exp();
        let oracle = [
            g,
            -x * g,
            (x * x - 1.0) * g,
            (3.0 * x - x.powi(3)) * g,
            (x.powi(4) - 6.0 * x * x + 3.0) * g,
        ];
        for (k, o) in oracle.iter().enumerate() {
            assert!((j.derivative(k).re - o).abs() < 1e-14, "order {k}");
        }
    }

    #[test]
    fn quotient_power_and_trig() {
        let x = 1.3;
        let one_over: Jet<4> = Jet::real(1.0) / (Jet::var(x) * Jet::var(x) + 1.0);
        let p: Jet<4> = (Jet::var(x) * Jet::var(x) + 1.0).powf(-1.0);
        for k in 0..4 {
            assert!((one_over.derivative(k) - p.derivative(k)).norm() < 1e-13);
        }
        let d = 1.0 / (1.0 + x * x);
        assert!((one_over.derivative(1).re + 2.0 * x * d * d).abs() < 1e-14);
        let s: Jet<5> = Jet::var(x).sin();
        let c: Jet<5> = Jet::var(x).cos();
        assert!((s.derivative(3).re + x.cos()).abs() < 1e-14);
        assert!((c.derivative(4).re - x.cos()).abs() < 1e-14);
        assert!((s.value().re - x.sin()).abs() < 1e-15);
    }
}
