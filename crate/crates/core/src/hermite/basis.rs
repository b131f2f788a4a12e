//! Hermite polynomials `H_m`, normalized polynomials `K_m` and Hermite functions `u_m`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Degree above which [`hermite_eval`] switches to the rescaled recurrence.
pub const DIRECT_RECURRENCE_MAX: usize = 300;

const RESCALE: f64 = 1e150;

/// `H_m(x)` by `H_{m+1} = 2x H_m − 2m H_{m−1}`; infinite once the value leaves range.
pub fn hermite_eval<T: Real>(m: usize, x: T) -> T {
    if m <= DIRECT_RECURRENCE_MAX {
        let two = T::lit(2.0);
        let (mut h0, mut h1) = (T::one(), two * x);
        if m == 0 {
            return h0;
        }
        for k in 1..m {
            let h2 = two * x * h1 - two * T::from_usize_lossy(k) * h0;
            h0 = h1;
            h1 = h2;
        }
        return h1;
    }
    let (sign, ln_abs) = hermite_ln_abs(m, x);
    sign * ln_abs.exp()
}

/// `(sign, ln|H_m(x)|)` without overflow.
pub fn hermite_ln_abs<T: Real>(m: usize, x: T) -> (T, T) {
    let (k, ln_scale) = normalized_hermite(x, m);
    let v = k[m];
    if v == T::zero() {
        return (T::zero(), T::neg_infinity());
    }
    // H_m = K_m · (√π 2^m m!)^{1/2}
    let ln_norm = T::lit(0.5)
        * (T::lit(0.5) * T::PI().ln()
            + T::from_usize_lossy(m) * T::LN_2()
            + crate::special::ln_gamma(T::from_usize_lossy(m + 1)));
    (v.signum(), v.abs().ln() + ln_scale + ln_norm)
}

/// `K_0(x), …, K_m(x)` orthonormal in `L²(e^{−x²}dx)`, returned as `(values, ln_scale)`
/// with true values `values · e^{ln_scale}`.
pub fn normalized_hermite<T: Real>(x: T, m: usize) -> (Vec<T>, T) {
    let mut out = Vec::with_capacity(m + 1);
    let mut ln_scale = T::zero();
    let big = T::lit(RESCALE);
    let two = T::lit(2.0);
    let mut prev = T::zero();
    let mut cur = T::PI().powf(T::lit(-0.25));
    out.push(cur);
    for k in 0..m {
        let kf = T::from_usize_lossy(k);
        let next = (two / (kf + T::one())).sqrt() * x * cur - (kf / (kf + T::one())).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > big {
            let inv = big.recip();
            for v in out.iter_mut() {
                *v = *v * inv;
            }
            prev = prev * inv;
            cur = cur * inv;
            ln_scale = ln_scale + big.ln();
        }
        out.push(cur);
    }
    (out, ln_scale)
}

/// Hermite functions `u_k(x) = K_k(x) e^{−x²/2}` for `k = 0..=m`.
pub fn hermite_functions<T: Real>(x: T, m: usize) -> Vec<T> {
    let (mut v, ln_scale) = normalized_hermite(x, m);
    let factor = (ln_scale - x * x * T::lit(0.5)).exp();
    for a in v.iter_mut() {
        *a = *a * factor;
    }
    v
}

/// `K_m(x)`; overflows to infinity for very large degree and argument.
pub fn normalized_eval<T: Real>(m: usize, x: T) -> T {
    let (v, s) = normalized_hermite(x, m);
    v[m] * s.exp()
}

/// Degree and shift constant for an expansion in `K_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteBasis<T> {
    max_degree: usize,
    c: T,
}

impl<T: Real> HermiteBasis<T> {
    pub fn new(max_degree: usize, c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::Input(format!(
                "shift constant c must be > 0, got {c}"
            )));
        }
        Ok(Self { max_degree, c })
    }

    pub fn with_default_shift(max_degree: usize) -> Self {
        Self {
            max_degree,
            c: T::one(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn c(&self) -> T {
        self.c
    }

    /// Eigenvalue `2m + c` of `A_H`.
    pub fn hermite_eigenvalue(&self, m: usize) -> T {
        T::lit(2.0) * T::from_usize_lossy(m) + self.c
    }

    pub fn eval(&self, m: usize, x: T) -> Result<T> {
        if m > self.max_degree {
            return Err(Error::Input(format!(
                "degree {m} above basis maximum {}",
                self.max_degree
            )));
        }
        Ok(hermite_eval(m, x))
    }
}

/// `π^{1/2} 2^m m!`, the squared norm of `H_m` in `L²(e^{−x²}dx)`.
pub fn hermite_norm_sq(m: usize) -> f64 {
    (0.5 * std::f64::consts::PI.ln()
        + m as f64 * std::f64::consts::LN_2
        + crate::special::ln_gamma((m + 1) as f64))
    .exp()
}
