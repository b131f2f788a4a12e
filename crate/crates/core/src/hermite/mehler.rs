//! Mehler's kernel for `e^{−t T_HO}` and its Hermite-side conjugate.

use super::basis::hermite_functions;
use crate::error::{Error, Result};
use std::f64::consts::{LN_2, PI};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MehlerSide {
    /// Kernel against `dx` on `L²(ℝ)`.
    Oscillator,
    /// Kernel of `e^{−t A_H}` against `e^{−x²}dx`, with `A_H` spectrum `{2m + c}`.
    Hermite { c: f64 },
}

/// `ln sinh z` for `z > 0` without overflow.
fn ln_sinh(z: f64) -> f64 {
    if z < 1.0 {
        z.sinh().ln()
    } else {
        z + (-(-2.0 * z).exp()).ln_1p() - LN_2
    }
}

/// `[2π sinh 2t]^{−1/2} exp{−coth(2t)(x²+y²)/2 + xy/sinh 2t}`, or its Hermite-side form.
pub fn mehler_kernel(t: f64, x: f64, y: f64, side: MehlerSide) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Input(format!("t must be > 0, got {t}")));
    }
    // coth(2t)(x²+y²)/2 − xy/sinh 2t = (x−y)²/(2 sinh 2t) + tanh(t)(x²+y²)/2
    let ln_pref = -0.5 * ((2.0 * PI).ln() + ln_sinh(2.0 * t));
    let d = x - y;
    let q = d * d * (-ln_sinh(2.0 * t) - LN_2).exp() + 0.5 * t.tanh() * (x * x + y * y);
    let ln_k = ln_pref - q;
    match side {
        MehlerSide::Oscillator => Ok(ln_k.exp()),
        MehlerSide::Hermite { c } => {
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::Input(format!(
                    "shift constant c must be > 0, got {c}"
                )));
            }
            Ok((ln_k + 0.5 * (x * x + y * y) - t * (c - 1.0)).exp())
        }
    }
}

/// `Σ_{m ≤ terms} e^{−(2m+1)t} u_m(x) u_m(y)`.
pub fn mehler_eigensum(t: f64, x: f64, y: f64, terms: usize) -> f64 {
    let ux = hermite_functions(x, terms);
    let uy = hermite_functions(y, terms);
    let v: Vec<f64> = (0..=terms)
        .map(|m| (-(2.0 * m as f64 + 1.0) * t).exp() * ux[m] * uy[m])
        .collect();
    crate::sum::pairwise(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{uniform_breaks, GaussLegendre};

    #[test]
    fn eigensum_agrees() {
        let k = mehler_kernel(0.5, 0.3, -0.2, MehlerSide::Oscillator).unwrap();
        assert!((k - mehler_eigensum(0.5, 0.3, -0.2, 200)).abs() < 1e-8);
        for &(t, x, y) in &[(0.1, 1.0, 0.5), (2.0, -1.5, 2.0), (0.25, 0.0, 0.0)] {
            let a = mehler_kernel(t, x, y, MehlerSide::Oscillator).unwrap();
            assert!(
                (a - mehler_eigensum(t, x, y, 200)).abs() < 1e-8,
                "t={t} x={x} y={y}"
            );
        }
    }

    #[test]
    fn symmetry_and_errors() {
        let a = mehler_kernel(0.7, 0.4, -1.1, MehlerSide::Hermite { c: 2.0 }).unwrap();
        let b = mehler_kernel(0.7, -1.1, 0.4, MehlerSide::Hermite { c: 2.0 }).unwrap();
        assert_eq!(a, b);
        assert!(mehler_kernel(0.0, 0.0, 0.0, MehlerSide::Oscillator).is_err());
        assert!(mehler_kernel(-1.0, 0.0, 0.0, MehlerSide::Oscillator).is_err());
        // Small and large t stay finite.
        assert!(mehler_kernel(1e-6, 0.1, 0.1, MehlerSide::Oscillator)
            .unwrap()
            .is_finite());
        assert!(mehler_kernel(400.0, 0.1, 0.1, MehlerSide::Oscillator).unwrap() > 0.0);
    }

    #[test]
    fn hermite_side_matches_normalized_eigensum() {
        let (t, x, y, c) = (0.4, 0.6, -0.3, 2.5);
        let kx = crate::hermite::basis::normalized_hermite(x, 200).0;
        let ky = crate::hermite::basis::normalized_hermite(y, 200).0;
        let sum: f64 = (0..=200)
            .map(|m| (-(2.0 * m as f64 + c) * t).exp() * kx[m] * ky[m])
            .sum();
        let k = mehler_kernel(t, x, y, MehlerSide::Hermite { c }).unwrap();
        assert!((k - sum).abs() < 1e-10 * sum.abs().max(1.0));
    }

    #[test]
    fn semigroup_composition() {
        let gl = GaussLegendre::<f64>::new(16);
        let breaks = uniform_breaks(-12.0, 12.0, 96);
        let (t, s, x, y) = (0.3, 0.4, 0.5, -0.8);
        let v = gl.integrate_panels(&breaks, |z| {
            mehler_kernel(t, x, z, MehlerSide::Oscillator).unwrap()
                * mehler_kernel(s, z, y, MehlerSide::Oscillator).unwrap()
        });
        let want = mehler_kernel(t + s, x, y, MehlerSide::Oscillator).unwrap();
        assert!((v - want).abs() < 1e-6);
    }
}
