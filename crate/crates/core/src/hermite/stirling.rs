//! Stirling numbers of the second kind and the divergence-form coefficients `c_j(n,c)`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Zero};

pub const STIRLING_MAX: usize = 12;
pub const POWER_MAX: usize = 10;

/// `S(ℓ, j)` for `ℓ, j ≤ 12`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    s: Vec<Vec<u64>>,
}

impl Default for StirlingTable {
    fn default() -> Self {
        Self::new()
    }
}

impl StirlingTable {
    pub fn new() -> Self {
        let n = STIRLING_MAX;
        let mut s = vec![vec![0u64; n + 1]; n + 1];
        s[0][0] = 1;
        for l in 0..n {
            for j in 1..=l + 1 {
                s[l + 1][j] = j as u64 * s[l][j] + s[l][j - 1];
            }
        }
        Self { s }
    }

    pub fn get(&self, l: usize, j: usize) -> u64 {
        if l > STIRLING_MAX || j > STIRLING_MAX {
            return 0;
        }
        self.s[l][j]
    }
}

/// `c_0(n,c), …, c_n(n,c)` with `τ_H^n = Σ_j (−1)^j c_j e^{x²} D^j e^{−x²} D^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeftDefiniteCoefficients<T> {
    pub n: usize,
    pub c: T,
    pub cj: Vec<T>,
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// `c_j(n,c) = Σ_{i=j}^{n} C(n,i) c^{n−i} 2^{i−j} S(i,j)`.
pub fn stirling_coefficients<T>(n: usize, c: T) -> Result<LeftDefiniteCoefficients<T>>
where
    T: Num + Clone + FromPrimitive + PartialOrd,
{
    if n == 0 || n > POWER_MAX {
        return Err(Error::Input(format!(
            "power n must lie in 1..={POWER_MAX}, got {n}"
        )));
    }
    if !(c > T::zero()) {
        return Err(Error::Input("shift constant c must be > 0".into()));
    }
    let table = StirlingTable::new();
    let from = |v: u64| T::from_u64(v).expect("small integers are representable");
    let pow = |b: &T, e: usize| (0..e).fold(T::one(), |acc, _| acc * b.clone());
    let cj = (0..=n)
        .map(|j| {
            (j..=n).fold(T::zero(), |acc, i| {
                acc + from(binomial(n, i))
                    * pow(&c, n - i)
                    * pow(&from(2), i - j)
                    * from(table.get(i, j))
            })
        })
        .collect();
    Ok(LeftDefiniteCoefficients { n, c, cj })
}

/// Dense polynomial in `x` with exact rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn monomial(d: usize) -> Self {
        let mut v = vec![BigRational::zero(); d + 1];
        v[d] = BigRational::one();
        Poly(v)
    }

    pub fn derivative(&self) -> Self {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// `x · p`.
    pub fn shift_up(&self) -> Self {
        let mut v = vec![BigRational::zero()];
        v.extend(self.0.iter().cloned());
        Poly(v)
    }

    pub fn scale(&self, a: &BigRational) -> Self {
        Poly(self.0.iter().map(|x| x * a).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Poly(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(BigRational::zero);
                    let b = o.0.get(i).cloned().unwrap_or_else(BigRational::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|a| a.is_zero()) {
            self.0.pop();
        }
        self
    }
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `τ_H p = −p″ + 2x p′ + c p`.
pub fn tau_h(p: &Poly, c: &BigRational) -> Poly {
    let d1 = p.derivative();
    let d2 = d1.derivative();
    d2.scale(&rat(-1))
        .add(&d1.shift_up().scale(&rat(2)))
        .add(&p.scale(c))
        .trimmed()
}

/// `e^{x²} (e^{−x²} q)′ = q′ − 2x q`.
fn weighted_derivative(q: &Poly) -> Poly {
    q.derivative().add(&q.shift_up().scale(&rat(-2)))
}

/// `Σ_j (−1)^j c_j e^{x²} (e^{−x²} p^{(j)})^{(j)}`.
pub fn divergence_form(p: &Poly, coeffs: &LeftDefiniteCoefficients<BigRational>) -> Poly {
    let mut acc = Poly(vec![]);
    let mut dj = p.clone();
    for (j, cj) in coeffs.cj.iter().enumerate() {
        let mut term = dj.clone();
        for _ in 0..j {
            term = weighted_derivative(&term);
        }
        let sign = if j % 2 == 0 { rat(1) } else { rat(-1) };
        acc = acc.add(&term.scale(&(cj * sign)));
        dj = dj.derivative();
    }
    acc.trimmed()
}

/// Checks `τ_H^n x^d` against the divergence form for every degree `d ≤ max_degree`.
pub fn symbolic_check(n: usize, c: &BigRational, max_degree: usize) -> Result<bool> {
    let coeffs = stirling_coefficients(n, c.clone())?;
    for d in 0..=max_degree {
        let mut lhs = Poly::monomial(d);
        for _ in 0..n {
            lhs = tau_h(&lhs, c);
        }
        if lhs.trimmed() != divergence_form(&Poly::monomial(d), &coeffs) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_invariants() {
        let t = StirlingTable::new();
        for l in 1..=STIRLING_MAX {
            assert_eq!(t.get(l, 1), 1);
            assert_eq!(t.get(l, l), 1);
        }
        assert_eq!(t.get(5, 2), 15);
        assert_eq!(t.get(6, 3), 90);
        assert_eq!(t.get(12, 6), 1_323_652);
    }

    #[test]
    fn coefficient_examples() {
        for n in 1..=POWER_MAX {
            let c = stirling_coefficients(n, 1.7f64).unwrap();
            assert!((c.cj[0] - 1.7f64.powi(n as i32)).abs() < 1e-10 * c.cj[0]);
            assert_eq!(c.cj[n], 1.0);
        }
        assert_eq!(stirling_coefficients(1, 3.0).unwrap().cj, vec![3.0, 1.0]);
        let two = stirling_coefficients(2, 1.0).unwrap();
        assert!(two.cj.iter().all(|&v| v > 0.0));
        // τ_H² = c² + (2c + 2)(−E D) + E²D²
        assert_eq!(two.cj, vec![1.0, 4.0, 1.0]);
        assert!(stirling_coefficients(11, 1.0).is_err());
        assert!(stirling_coefficients(2, 0.0).is_err());
    }

    #[test]
    fn symbolic_oracle_agrees() {
        for n in 1..=6 {
            for c in [
                rat(1),
                rat(2),
                BigRational::new(BigInt::from(3), BigInt::from(7)),
            ] {
                assert!(symbolic_check(n, &c, 8).unwrap(), "n = {n}, c = {c}");
            }
        }
    }

    #[test]
    fn exact_and_float_tables_agree() {
        let exact = stirling_coefficients(7, rat(2)).unwrap();
        let float = stirling_coefficients(7, 2.0f64).unwrap();
        for (e, f) in exact.cj.iter().zip(&float.cj) {
            let e: f64 = e.to_integer().to_string().parse().unwrap();
            assert_eq!(e, *f);
        }
    }
}
