//! Coefficients against `u_m` / `K_m`, fractional oscillator norms and the Sobolev-side predicate.

use super::basis::{hermite_functions, normalized_hermite};
use super::quadrature::GaussHermite;
use super::stirling::stirling_coefficients;
use crate::error::{Error, Result};
use crate::function::{Decay, Support, TestFunction};
use crate::quad::{refine_breaks, with_extra_breaks, GaussLegendre};
use crate::sobolev::{weighted_moment_norm, whole_line_membership};
use crate::spectral::{DivergencePolicy, MembershipStatus, MembershipVerdict, Prediction};
use crate::sum::pairwise;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Truncation used by [`oscillator_fractional_norm`].
pub const OSCILLATOR_TERMS: usize = 1024;

/// Whole-line functions exercised by the Sobolev/oscillator agreement checks.
pub const WHOLE_LINE_CATALOG: [&str; 13] = [
    "gauss(0,1)",
    "gauss(0.5,0.7)",
    "gauss(0,2)",
    "hermite(3)",
    "hermite(6)",
    "hat(-1,1)",
    "hat(-2,1)",
    "bump(-1,1)",
    "bump(-2,3)",
    "decay(1.2)",
    "decay(2.2)",
    "decay(3.2)",
    "abs-gauss",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Against `u_m` in `L²(ℝ)`.
    Oscillator,
    /// Against `K_m` in `L²(ℝ; e^{−x²}dx)`.
    Hermite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorState {
    pub a: Vec<Complex64>,
    pub side: Side,
    /// The coefficients describe a finite combination with no truncation error.
    pub exact: bool,
    pub parseval_defect: Option<f64>,
}

impl OscillatorState {
    pub fn from_coefficients(a: Vec<Complex64>, side: Side) -> Self {
        Self {
            a,
            side,
            exact: true,
            parseval_defect: None,
        }
    }

    /// The `m`-th basis vector.
    pub fn unit(m: usize, side: Side) -> Self {
        let mut a = vec![Complex64::new(0.0, 0.0); m + 1];
        a[m] = Complex64::new(1.0, 0.0);
        Self::from_coefficients(a, side)
    }

    /// The same vector after `v ↦ e^{∓x²/2} v`; coefficients do not change.
    pub fn converted(&self, side: Side) -> Self {
        Self {
            side,
            ..self.clone()
        }
    }

    pub fn max_degree(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    /// `Σ a_m u_m(x)` or `Σ a_m K_m(x)`.
    pub fn eval(&self, x: f64) -> Complex64 {
        let m = self.max_degree();
        let basis = match self.side {
            Side::Oscillator => hermite_functions(x, m),
            Side::Hermite => {
                let (v, s) = normalized_hermite(x, m);
                v.into_iter().map(|k| k * s.exp()).collect()
            }
        };
        self.a.iter().zip(basis).map(|(a, b)| a * b).sum()
    }

    /// `(2m + c)^s |a_m|²`; on the oscillator side `c = 1` is the spectrum of `T_HO`.
    pub fn weighted_terms(&self, s: f64, c: f64) -> Vec<f64> {
        self.a
            .iter()
            .enumerate()
            .map(|(m, a)| (2.0 * m as f64 + c).powf(s) * a.norm_sqr())
            .collect()
    }

    pub fn weighted_norm(&self, s: f64, c: f64) -> f64 {
        pairwise(&self.weighted_terms(s, c)).sqrt()
    }

    pub fn membership(&self, s: f64, c: f64, policy: &DivergencePolicy) -> MembershipVerdict {
        if self.exact {
            let t = self.weighted_terms(s, c);
            return MembershipVerdict::member(pairwise(&t), vec![]);
        }
        policy.classify_terms(&self.weighted_terms(s, c))
    }
}

/// Coefficients by Gauss–Hermite quadrature with `2M + 32` nodes.
///
/// On the Hermite side `a_m = ∫ f K_m e^{−x²}`; on the oscillator side
/// `a_m = ∫ f u_m`, which the rule integrates accurately only when `f e^{x²/2}`
/// is of polynomial type.
pub fn gauss_hermite_transform(
    f: &TestFunction,
    max_degree: usize,
    side: Side,
) -> Result<OscillatorState> {
    f.require_position_values()?;
    if side == Side::Oscillator && !matches!(f.decay(), Decay::Gaussian | Decay::Compact) {
        return Err(Error::Capability(format!(
            "{}: decay {:?} too slow for the Gauss-Hermite window",
            f.name(),
            f.decay()
        )));
    }
    let gh = GaussHermite::new(2 * max_degree + 32)?;
    let mut a = vec![Complex64::new(0.0, 0.0); max_degree + 1];
    let mut mass = Vec::with_capacity(gh.order());
    for (&x, &ln_w) in gh.nodes.iter().zip(&gh.ln_weights) {
        let (k, ln_scale) = normalized_hermite(x, max_degree);
        // √w K_m is bounded by 1, so the split keeps every factor in range.
        let half = 0.5 * ln_w;
        let shift = match side {
            Side::Hermite => 0.0,
            Side::Oscillator => 0.5 * x * x,
        };
        let fx = f.eval(x) * (half + shift).exp();
        mass.push(fx.norm_sqr());
        let kscale = (half + ln_scale).exp();
        for (am, km) in a.iter_mut().zip(&k) {
            *am += fx * (km * kscale);
        }
    }
    let total = pairwise(&mass);
    let captured = pairwise(&a.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>());
    Ok(OscillatorState {
        a,
        side,
        exact: false,
        parseval_defect: Some(if total > 0.0 {
            (total - captured).abs() / total
        } else {
            0.0
        }),
    })
}

/// `a_m = ∫ f u_m dx` for `m ≤ M` by composite Gauss–Legendre quadrature.
///
/// Functions known only through `f̂` use `a_m = i^m ∫ f̂ u_m`, since `F u_m = (−i)^m u_m`.
pub fn oscillator_coefficients(f: &TestFunction, max_degree: usize) -> Result<OscillatorState> {
    match f.decay() {
        Decay::None => {
            return Err(Error::NotRepresentable(format!(
                "{} is not square integrable",
                f.name()
            )))
        }
        Decay::Polynomial(p) if p <= 0.5 && f.has_position_values() => {
            return Err(Error::NotRepresentable(format!(
                "{} is not square integrable",
                f.name()
            )))
        }
        _ => {}
    }
    let reach = (2.0 * max_degree as f64 + 1.0).sqrt() + 10.0;
    let spectral = !f.has_position_values();
    let (lo, hi) = match f.support() {
        Support::Compact(a, b) if !spectral => (a.max(-reach), b.min(reach)),
        _ => (-reach, reach),
    };
    let g: Box<dyn Fn(f64) -> Complex64> = if spectral {
        let ft = f
            .analytic_fourier()
            .ok_or_else(|| {
                Error::Capability(format!("{} has neither values nor a transform", f.name()))
            })?
            .clone();
        Box::new(move |x| ft(x))
    } else {
        Box::new(|x| f.eval(x))
    };
    let kinks: &[f64] = if spectral { &[] } else { f.kinks() };
    let breaks = refine_breaks(
        &with_extra_breaks(lo, hi, kinks),
        f.feature_scale().min(0.25),
    );
    let gl = GaussLegendre::<f64>::new(16);
    let mut a = vec![Complex64::new(0.0, 0.0); max_degree + 1];
    let mut mass = Vec::new();
    for w in breaks.windows(2) {
        for (x, q) in gl.mapped(w[0], w[1]) {
            let v = g(x) * q;
            mass.push(q * g(x).norm_sqr());
            for (am, u) in a.iter_mut().zip(hermite_functions(x, max_degree)) {
                *am += v * u;
            }
        }
    }
    if spectral {
        let mut phase = Complex64::new(1.0, 0.0);
        for am in a.iter_mut() {
            *am *= phase;
            phase *= Complex64::i();
        }
    }
    let total = pairwise(&mass);
    let captured = pairwise(&a.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>());
    Ok(OscillatorState {
        a,
        side: Side::Oscillator,
        exact: false,
        parseval_defect: Some(if total > 0.0 {
            (total - captured).abs() / total
        } else {
            0.0
        }),
    })
}

/// `(Σ (2m+1)^s |a_m|²)^{1/2}` over `m ≤ 1024` with the dyadic slope policy.
pub fn oscillator_fractional_norm(f: &TestFunction, s: f64) -> Result<MembershipVerdict> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::Input(format!("s must be >= 0, got {s}")));
    }
    let state = match oscillator_coefficients(f, OSCILLATOR_TERMS) {
        Err(Error::NotRepresentable(why)) => {
            return Ok(MembershipVerdict::non_member(f64::INFINITY, vec![]).with_diagnostic(why))
        }
        other => other?,
    };
    let v = state.membership(s, 1.0, &oscillator_policy());
    Ok(match state.parseval_defect {
        Some(d) if d > 1e-6 => {
            v.with_diagnostic(format!("Parseval defect {d:.2e} at M = {OSCILLATOR_TERMS}"))
        }
        _ => v,
    })
}

/// Membership of `f` in `dom(T^s)`: the weight `(2m+1)^{2s}`.
pub fn oscillator_domain_membership(f: &TestFunction, s: f64) -> Result<MembershipVerdict> {
    oscillator_fractional_norm(f, 2.0 * s)
}

fn oscillator_policy() -> DivergencePolicy {
    let bits = OSCILLATOR_TERMS.trailing_zeros();
    DivergencePolicy::dyadic(2, bits)
}

/// `f ∈ H^{2s}(ℝ)` and `∫ |x|^{4s} |f|² < ∞`; errors when either side is inconclusive.
pub fn sobolev_side_membership(f: &TestFunction, s: f64) -> Result<Prediction> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Input(format!("s must be > 0, got {s}")));
    }
    let smooth = whole_line_membership(f, 2.0 * s)?;
    if smooth.is_non_member() {
        return Ok(Prediction::PredictedNonMember);
    }
    let moment = weighted_moment_norm(f, 2.0 * s)?.verdict;
    if moment.is_non_member() {
        return Ok(Prediction::PredictedNonMember);
    }
    if smooth.is_member() && moment.is_member() {
        return Ok(Prediction::PredictedMember);
    }
    let why = |v: &MembershipVerdict| {
        v.diagnostic
            .clone()
            .unwrap_or_else(|| format!("{:?}", v.status))
    };
    Err(Error::Capability(format!(
        "{}: inconclusive (H^2s: {}, moment: {})",
        f.name(),
        why(&smooth),
        why(&moment)
    )))
}

/// Both sides of `Σ_j c_j(n,c) ∫ e^{−x²} (f^{(j)})‾ g^{(j)} = Σ_m (2m+c)^n a_m(f)‾ a_m(g)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeftDefiniteValue {
    pub derivative_form: Complex64,
    pub spectral_form: Complex64,
}

impl LeftDefiniteValue {
    pub fn relative_gap(&self, scale: f64) -> f64 {
        (self.derivative_form - self.spectral_form).norm() / scale.max(f64::MIN_POSITIVE)
    }
}

/// `f^{(j)}` of `Σ a_m K_m` via `K_m′ = √(2m) K_{m−1}`, as coefficients against `K`.
fn derivative_coefficients(a: &[Complex64], j: usize) -> Vec<Complex64> {
    let mut cur = a.to_vec();
    for _ in 0..j {
        cur = (1..cur.len())
            .map(|m| cur[m] * (2.0 * m as f64).sqrt())
            .collect();
    }
    cur
}

/// The left-definite inner product of two finite Hermite combinations, computed both ways.
pub fn left_definite_inner_product(
    f: &OscillatorState,
    g: &OscillatorState,
    n: usize,
    c: f64,
) -> Result<LeftDefiniteValue> {
    if !f.exact || !g.exact {
        return Err(Error::Capability(
            "derivative data is analytic only for finite Hermite combinations".into(),
        ));
    }
    let coeffs = stirling_coefficients(n, c)?;
    let degree = f.max_degree().max(g.max_degree());
    let gh = GaussHermite::new(degree + 8)?;
    let mut terms = Vec::with_capacity(n + 1);
    for (j, cj) in coeffs.cj.iter().enumerate() {
        let (df, dg) = (
            derivative_coefficients(&f.a, j),
            derivative_coefficients(&g.a, j),
        );
        let eval = |d: &[Complex64], x: f64| -> Complex64 {
            if d.is_empty() {
                return Complex64::new(0.0, 0.0);
            }
            let (k, s) = normalized_hermite(x, d.len() - 1);
            d.iter().zip(k).map(|(a, v)| a * (v * s.exp())).sum()
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &w) in gh.nodes.iter().zip(&gh.weights) {
            acc += eval(&df, x).conj() * eval(&dg, x) * w;
        }
        terms.push(acc * *cj);
    }
    let derivative_form = terms.into_iter().sum();
    let spectral_form =
        f.a.iter()
            .zip(&g.a)
            .enumerate()
            .map(|(m, (a, b))| a.conj() * b * (2.0 * m as f64 + c).powi(n as i32))
            .sum();
    Ok(LeftDefiniteValue {
        derivative_form,
        spectral_form,
    })
}

/// Convergence of `Σ (2m+1)^{−p}`, i.e. whether `(T_HO)^{−1}` lies in the ideal `B_p`.
pub fn resolvent_trace_membership(p: f64) -> MembershipVerdict {
    let policy = DivergencePolicy::default();
    let terms: Vec<f64> = (0..policy.max_checkpoint())
        .map(|m| (2.0 * m as f64 + 1.0).powf(-p))
        .collect();
    policy.classify_terms(&terms)
}

/// `true` when the two verdicts are determinate and disagree.
pub fn disagrees(prediction: Prediction, v: &MembershipVerdict) -> bool {
    v.status != MembershipStatus::Indeterminate && prediction.is_member() != v.is_member()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::catalog;

    fn k_function(m: usize) -> TestFunction {
        use std::sync::Arc;
        TestFunction::custom(
            "K",
            Arc::new(move |x| Complex64::new(super::super::basis::normalized_eval(m, x), 0.0)),
            None,
            Support::WholeLine,
            crate::function::Smoothness::Infinite,
            Decay::None,
        )
        .unwrap()
    }

    #[test]
    fn transform_examples() {
        let s = gauss_hermite_transform(&k_function(3), 10, Side::Hermite).unwrap();
        for (m, a) in s.a.iter().enumerate() {
            let want = if m == 3 { 1.0 } else { 0.0 };
            assert!(
                (a.re - want).abs() < 1e-12 && a.im.abs() < 1e-12,
                "m = {m}: {a}"
            );
        }
        use std::sync::Arc;
        let sq = TestFunction::custom(
            "x^2",
            Arc::new(|x| Complex64::new(x * x, 0.0)),
            None,
            Support::WholeLine,
            crate::function::Smoothness::Infinite,
            Decay::None,
        )
        .unwrap();
        let s = gauss_hermite_transform(&sq, 8, Side::Hermite).unwrap();
        // x² = (H_2 + 2H_0)/4 with ‖H_0‖² = √π, ‖H_2‖² = 8√π.
        let r = std::f64::consts::PI.sqrt();
        assert!((s.a[0].re - 0.5 * r.sqrt()).abs() < 1e-12);
        assert!((s.a[2].re - 0.25 * (8.0 * r).sqrt()).abs() < 1e-12);
        for m in [1, 3, 4, 5, 6, 7, 8] {
            assert!(s.a[m].norm() < 1e-12);
        }
        let g = gauss_hermite_transform(&catalog("gauss(0,1)"), 64, Side::Hermite).unwrap();
        assert!(g.parseval_defect.unwrap() < 1e-10);
        assert!(g.a.iter().skip(1).step_by(2).all(|a| a.norm() < 1e-13));
    }

    #[test]
    fn oscillator_side_of_hermite_functions() {
        let s = gauss_hermite_transform(&catalog("hermite(4)"), 12, Side::Oscillator).unwrap();
        assert!((s.a[4].re - 1.0).abs() < 1e-12);
        assert!(gauss_hermite_transform(&catalog("decay(2)"), 12, Side::Oscillator).is_err());
        let q = oscillator_coefficients(&catalog("hermite(4)"), 16).unwrap();
        assert!((q.a[4].re - 1.0).abs() < 1e-12);
        assert!(q.parseval_defect.unwrap() < 1e-12);
    }

    #[test]
    fn norm_examples() {
        let u0 = OscillatorState::unit(0, Side::Oscillator);
        for s in [0.0, 0.5, 3.0] {
            assert!((u0.weighted_norm(s, 1.0) - 1.0).abs() < 1e-15);
        }
        let a: Vec<Complex64> = (0..=20)
            .map(|m| Complex64::new(1.0 / (m as f64 + 1.0), 0.0))
            .collect();
        let st = OscillatorState::from_coefficients(a, Side::Oscillator);
        let want: f64 = (0..=20)
            .map(|m| (2.0 * m as f64 + 1.0) / ((m as f64 + 1.0).powi(2)))
            .sum::<f64>()
            .sqrt();
        assert!((st.weighted_norm(1.0, 1.0) - want).abs() < 1e-13);
        let v = oscillator_fractional_norm(&catalog("hermite(0)"), 2.0).unwrap();
        assert!(v.is_member() && (v.norm_estimate.unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gauss_sigma_two_matches_position_space_operator() {
        // T_HO f = −f″ + x² f for f = e^{−x²/8}.
        let f = catalog("gauss(0,2)");
        let gl = GaussLegendre::<f64>::new(16);
        let breaks = crate::quad::uniform_breaks(-40.0, 40.0, 320);
        let t_sq = gl.integrate_panels(&breaks, |x| {
            let v = -f.derivative(2, x).unwrap() + f.eval(x) * x * x;
            v.norm_sqr()
        });
        let v = oscillator_fractional_norm(&f, 2.0).unwrap();
        assert!(v.is_member());
        assert!((v.norm_estimate.unwrap() - t_sq.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn sobolev_side_examples() {
        for s in [0.25, 1.0, 2.0] {
            assert_eq!(
                sobolev_side_membership(&catalog("gauss(0,1)"), s).unwrap(),
                Prediction::PredictedMember
            );
        }
        assert_eq!(
            sobolev_side_membership(&catalog("decay(1)"), 0.5).unwrap(),
            Prediction::PredictedNonMember
        );
    }

    #[test]
    fn left_definite_examples() {
        for n in 1..=3 {
            for c in [1.0, 2.0] {
                let k0 = OscillatorState::unit(0, Side::Hermite);
                let v = left_definite_inner_product(&k0, &k0, n, c).unwrap();
                assert!((v.derivative_form.re - c.powi(n as i32)).abs() < 1e-12);
            }
        }
        let k1 = OscillatorState::unit(1, Side::Hermite);
        let v = left_definite_inner_product(&k1, &k1, 2, 1.5).unwrap();
        assert!((v.derivative_form.re - 3.5f64.powi(2)).abs() < 1e-11);
        let sum =
            OscillatorState::from_coefficients(vec![Complex64::new(1.0, 0.0); 2], Side::Hermite);
        let v = left_definite_inner_product(&sum, &k1, 1, 1.0).unwrap();
        assert!((v.derivative_form.re - 3.0).abs() < 1e-12);
        let approx = gauss_hermite_transform(&catalog("gauss(0,1)"), 8, Side::Hermite).unwrap();
        assert!(matches!(
            left_definite_inner_product(&approx, &k1, 1, 1.0),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn trace_ideal_threshold() {
        assert!(resolvent_trace_membership(1.1).is_member());
        assert!(resolvent_trace_membership(1.0).is_non_member());
    }
}
