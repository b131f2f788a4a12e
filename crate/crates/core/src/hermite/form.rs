//! Exact ladder arithmetic for `⟨f, (P^{4k} + X^{4k}) f⟩ ≤ a_k ⟨f, (P² + X²)^{2k} f⟩ + b_k ‖f‖²`.
//!
//! Vectors are stored against `b_m = H_m e^{−x²/2}`, where
//! `X b_m = b_{m+1}/2 + m b_{m−1}` and `D b_m = m b_{m−1} − b_{m+1}/2`
//! with `‖b_m‖² = √π 2^m m!`. The common `√π` cancels from every comparison.

use super::oscillator::{OscillatorState, Side};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::special::ln_gamma;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};
use serde::Serialize;

pub const MAX_FORM_POWER: usize = 3;

/// Coefficients against `b_m`, generic over the exact or floating field.
#[derive(Debug, Clone, PartialEq)]
pub struct Ladder<T>(pub Vec<T>);

impl<T: Num + Clone> Ladder<T> {
    fn get(&self, m: usize) -> T {
        self.0.get(m).cloned().unwrap_or_else(T::zero)
    }

    fn int(m: usize) -> T {
        (0..m).fold(T::zero(), |acc, _| acc + T::one())
    }

    /// Position `X`.
    pub fn x(&self) -> Self {
        let two = T::one() + T::one();
        let n = self.0.len() + 1;
        Ladder(
            (0..n)
                .map(|m| {
                    let down = if m > 0 {
                        self.get(m - 1) / two.clone()
                    } else {
                        T::zero()
                    };
                    down + self.get(m + 1) * Self::int(m + 1)
                })
                .collect(),
        )
    }

    /// `d/dx`.
    pub fn d(&self) -> Self {
        let two = T::one() + T::one();
        let n = self.0.len() + 1;
        Ladder(
            (0..n)
                .map(|m| {
                    let down = if m > 0 {
                        self.get(m - 1) / two.clone()
                    } else {
                        T::zero()
                    };
                    self.get(m + 1) * Self::int(m + 1) - down
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Ladder((0..n).map(|m| self.get(m) - o.get(m)).collect())
    }

    pub fn apply_n(&self, n: usize, op: fn(&Self) -> Self) -> Self {
        (0..n).fold(self.clone(), |v, _| op(&v))
    }

    /// `‖v‖² / √π = Σ |v_m|² 2^m m!`.
    pub fn norm_sq(&self) -> T {
        let mut w = T::one();
        let mut acc = T::zero();
        for (m, v) in self.0.iter().enumerate() {
            if m > 0 {
                w = w * Self::int(2 * m);
            }
            acc = acc + v.clone() * v.clone() * w.clone();
        }
        acc
    }

    /// `(P² + X²) v = (X² − D²) v`.
    pub fn oscillator(&self) -> Self {
        self.x().x().sub(&self.d().d())
    }
}

/// `a_k`, `b_k` with `a_1 = 1`, `b_1 = 2`, `a_{k+1} = 2(a_k + b_k)` and `b_{k+1} = 2 c_k`.
pub fn form_constants(k: usize) -> Result<(BigRational, BigRational)> {
    if k == 0 || k > MAX_FORM_POWER {
        return Err(Error::Input(format!(
            "k must lie in 1..={MAX_FORM_POWER}, got {k}"
        )));
    }
    let r = |v: i64| BigRational::from_integer(BigInt::from(v));
    let (mut a, mut b) = (r(1), r(2));
    for j in 1..k {
        let jj = j as i64;
        let big_a = r((4 * jj + 2) * (4 * jj + 1));
        let u = r(2 * jj) * big_a.clone() / r(jj + 1);
        let mut u_pow = BigRational::one();
        for _ in 0..j {
            u_pow *= u.clone();
        }
        let c = r(2) * big_a * u_pow / r(jj + 1);
        a = r(2) * (a + b);
        b = r(2) * c;
    }
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormReport {
    pub k: usize,
    /// `⟨f, (P^{4k} + X^{4k}) f⟩ / ‖f‖²`.
    pub lhs: f64,
    /// `⟨f, (P² + X²)^{2k} f⟩ / ‖f‖²`.
    pub oscillator: f64,
    pub a_k: f64,
    pub b_k: f64,
    /// `(a_k · oscillator + b_k − lhs)`, normalized like the other entries.
    pub slack: f64,
    /// Decided in exact rational arithmetic.
    pub holds: bool,
}

/// Exact rational coefficients against `b_m` of a state on either side.
fn to_ladder(f: &OscillatorState) -> [Ladder<BigRational>; 2] {
    let convert = |part: fn(&Complex64) -> f64| -> Ladder<BigRational> {
        Ladder(
            f.a.iter()
                .enumerate()
                .map(|(m, a)| {
                    let ln_norm = 0.5
                        * (0.5 * std::f64::consts::PI.ln()
                            + m as f64 * std::f64::consts::LN_2
                            + ln_gamma((m + 1) as f64));
                    let beta = part(a) * (-ln_norm).exp();
                    BigRational::from_float(beta).unwrap_or_else(BigRational::zero)
                })
                .collect(),
        )
    };
    [convert(|a| a.re), convert(|a| a.im)]
}

fn ratio(a: &BigRational, b: &BigRational) -> f64 {
    (a / b).to_f64().unwrap_or(f64::NAN)
}

/// Evaluates the quadratic forms of the form inequality for a finite combination.
pub fn form_inequality_check(f: &OscillatorState, k: usize) -> Result<FormReport> {
    let (a_k, b_k) = form_constants(k)?;
    let parts = to_ladder(f);
    let mut lhs = BigRational::zero();
    let mut mid = BigRational::zero();
    let mut norm = BigRational::zero();
    for v in &parts {
        lhs += v.apply_n(2 * k, Ladder::d).norm_sq() + v.apply_n(2 * k, Ladder::x).norm_sq();
        mid += v.apply_n(k, Ladder::oscillator).norm_sq();
        norm += v.norm_sq();
    }
    if norm.is_zero() {
        return Err(Error::Input("zero vector".into()));
    }
    let bound = a_k.clone() * mid.clone() + b_k.clone() * norm.clone();
    Ok(FormReport {
        k,
        lhs: ratio(&lhs, &norm),
        oscillator: ratio(&mid, &norm),
        a_k: a_k.to_f64().unwrap_or(f64::NAN),
        b_k: b_k.to_f64().unwrap_or(f64::NAN),
        slack: ratio(&(bound.clone() - lhs.clone()), &norm),
        holds: lhs <= bound,
    })
}

/// `terms` distinct degrees in `0..=max_degree` with coefficients uniform in `[−1, 1]`.
pub fn random_combination(
    rng: &mut SplitMix64,
    terms: usize,
    max_degree: usize,
) -> Result<OscillatorState> {
    if terms == 0 || terms > max_degree + 1 {
        return Err(Error::Input(format!(
            "cannot pick {terms} distinct degrees from 0..={max_degree}"
        )));
    }
    let mut degrees = Vec::with_capacity(terms);
    while degrees.len() < terms {
        let d = rng.below(max_degree + 1);
        if !degrees.contains(&d) {
            degrees.push(d);
        }
    }
    let top = *degrees.iter().max().expect("nonempty");
    let mut a = vec![Complex64::new(0.0, 0.0); top + 1];
    for d in degrees {
        a[d] = Complex64::new(rng.uniform(-1.0, 1.0), 0.0);
    }
    Ok(OscillatorState::from_coefficients(a, Side::Oscillator))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let r = |v: i64| BigRational::from_integer(BigInt::from(v));
        assert_eq!(form_constants(1).unwrap(), (r(1), r(2)));
        assert_eq!(form_constants(2).unwrap(), (r(6), r(1800)));
        assert_eq!(form_constants(3).unwrap(), (r(3612), r(1_728_000)));
        assert!(form_constants(4).is_err());
        assert!(form_constants(0).is_err());
    }

    #[test]
    fn ground_state() {
        let r = form_inequality_check(&OscillatorState::unit(0, Side::Oscillator), 1).unwrap();
        assert!((r.lhs - 1.5).abs() < 1e-14);
        assert!((r.oscillator - 1.0).abs() < 1e-14);
        assert!(r.holds && (r.slack - 1.5).abs() < 1e-14);
    }

    #[test]
    fn first_excited_state() {
        let r = form_inequality_check(&OscillatorState::unit(1, Side::Oscillator), 1).unwrap();
        // ⟨x⁴⟩ = ⟨p⁴⟩ = 15/4 and (P² + X²)² = 9 on u_1.
        assert!((r.lhs - 7.5).abs() < 1e-13);
        assert!((r.oscillator - 9.0).abs() < 1e-13);
        assert!(r.holds && r.slack > 0.0);
    }

    #[test]
    fn float_ladder_matches_eigenvalues() {
        // (X² − D²) b_m = (2m + 1) b_m
        for m in 0..8 {
            let mut v = vec![0.0; m + 1];
            v[m] = 1.0;
            let w = Ladder(v).oscillator();
            for (j, c) in w.0.iter().enumerate() {
                let want = if j == m { 2.0 * m as f64 + 1.0 } else { 0.0 };
                assert!((c - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn random_trials_hold() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..20 {
            let f = random_combination(&mut rng, 10, 30).unwrap();
            assert!(form_inequality_check(&f, 1).unwrap().holds);
        }
    }
}
