//! Real interpolation between `X = L²(μ)` and `Y = dom(A^k)` in the diagonal model.
//!
//! The K-functional is the squared-norm variant
//! `K̃(t, x) = inf_{x=a+b} ‖a‖²_X + t‖b‖²_Y`, which decouples per atom into
//! `|c|² w · tλ^{2k}/(1 + tλ^{2k})`. Because `K̃(t)` behaves like `K(√t)²`, the
//! `(X, Y)_{θ,2}` norm is `∫₀^∞ t^{−1−θ} K̃(t) dt`, which per atom equals
//! `π/sin(πθ) · λ^{2kθ} |c|² w`. Membership is therefore that of `dom(A^{kθ})`.
//!
//! All three characterizations are computed by Gauss–Legendre quadrature on
//! dyadic panels of the integration variable, with analytic power-law tails
//! beyond the panel range.

use crate::error::{Error, Result};
use crate::hermite::{mehler_kernel, MehlerSide, OscillatorState, Side};
use crate::quad::{refine_breaks, GaussLegendre};
use crate::scalar::Real;
use crate::special::beta;
use crate::spectral::{
    membership, CoefficientVector, DivergencePolicy, MembershipVerdict, ScaleIndex, Tail,
};
use crate::sum::pairwise;
use serde::Serialize;
use std::f64::consts::PI;

/// Dyadic panels reach `2^{±RANGE}` beyond the spectral scales.
const RANGE: i32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterpolationPair {
    /// Power of `A` defining `Y`; an integer for the semigroup and resolvent forms.
    pub k: f64,
    pub theta: f64,
}

impl InterpolationPair {
    pub fn new(k: u32, theta: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("k must be >= 1".into()));
        }
        Self::with_power(f64::from(k), theta)
    }

    /// `Y = dom(A^β)` for real `β > 0`.
    pub fn with_power(beta: f64, theta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Input(format!("power must be > 0, got {beta}")));
        }
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::Input(format!(
                "theta must lie in (0, 1), got {theta}"
            )));
        }
        Ok(Self { k: beta, theta })
    }

    fn integer_k(&self) -> Result<i32> {
        if self.k.fract() != 0.0 {
            return Err(Error::Input(format!(
                "k must be an integer here, got {}",
                self.k
            )));
        }
        Ok(self.k as i32)
    }

    /// `λ^{2kθ}`, the exponent of the equivalent domain norm.
    pub fn domain_index(&self) -> f64 {
        2.0 * self.k * self.theta
    }
}

fn check_support<T: Real>(x: &CoefficientVector<T>) -> Result<(f64, f64)> {
    let lambdas: Vec<f64> = x
        .nodes()
        .iter()
        .map(|a| a.lambda.to_f64().unwrap_or(f64::NAN))
        .collect();
    if lambdas.is_empty() {
        return Err(Error::Input("empty coefficient vector".into()));
    }
    let lo = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = lambdas.iter().copied().fold(0.0, f64::max);
    if !(lo >= 1.0) || !hi.is_finite() {
        return Err(Error::Input(format!(
            "interpolation needs spectral support in [1, inf), found {lo}"
        )));
    }
    Ok((lo, hi))
}

/// `K̃(t, x)^{1/2}`, minimized exactly per atom.
pub fn k_functional<T: Real>(
    x: &CoefficientVector<T>,
    pair: &InterpolationPair,
    t: T,
) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Input("t must be > 0".into()));
    }
    let two_k = T::lit(2.0 * pair.k);
    let terms: Vec<T> = x
        .coeffs()
        .iter()
        .zip(x.nodes())
        .map(|(c, a)| {
            let r = t * a.lambda.powf(two_k);
            c.norm_sqr() * a.weight * r / (T::one() + r)
        })
        .collect();
    Ok(pairwise(&terms).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[serde(rename = "kfunc")]
    KFunctional,
    Semigroup,
    Resolvent,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::KFunctional, Method::Semigroup, Method::Resolvent];

    pub fn name(self) -> &'static str {
        match self {
            Method::KFunctional => "kfunc",
            Method::Semigroup => "semigroup",
            Method::Resolvent => "resolvent",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown method {s:?}")))
    }
}

/// Per-atom integrand in the integration variable `v` and its tails beyond `[v0, v1]`.
struct Kernel {
    method: Method,
    k: f64,
    theta: f64,
}

impl Kernel {
    fn new(method: Method, pair: &InterpolationPair) -> Result<Self> {
        if method != Method::KFunctional {
            pair.integer_k()?;
        }
        Ok(Self {
            method,
            k: pair.k,
            theta: pair.theta,
        })
    }

    fn integrand(&self, v: f64, lambda: f64) -> f64 {
        let (k, th) = (self.k, self.theta);
        match self.method {
            Method::KFunctional => {
                let r = v * lambda.powf(2.0 * k);
                v.powf(-1.0 - th) * r / (1.0 + r)
            }
            Method::Semigroup => {
                v.powf(-1.0 - 2.0 * k * th) * (-(-v * lambda).exp_m1()).powf(2.0 * k)
            }
            Method::Resolvent => {
                v.powf(-1.0 + 2.0 * k * th) * (lambda / (lambda + v)).powf(2.0 * k)
            }
        }
    }

    fn tails(&self, v0: f64, v1: f64, lambda: f64) -> f64 {
        let (k, th) = (self.k, self.theta);
        let a = 2.0 * k * th;
        match self.method {
            Method::KFunctional => {
                lambda.powf(2.0 * k) * v0.powf(1.0 - th) / (1.0 - th) + v1.powf(-th) / th
            }
            Method::Semigroup => {
                lambda.powf(2.0 * k) * v0.powf(2.0 * k - a) / (2.0 * k - a) + v1.powf(-a) / a
            }
            Method::Resolvent => {
                v0.powf(a) / a + lambda.powf(2.0 * k) * v1.powf(a - 2.0 * k) / (2.0 * k - a)
            }
        }
    }

    /// Panel range covering every atom scale in `[lo, hi]`.
    fn range(&self, lo: f64, hi: f64) -> (f64, f64) {
        let e = 2.0f64.powi(RANGE);
        match self.method {
            Method::KFunctional => (hi.powf(-2.0 * self.k) / e, e / lo.powf(2.0 * self.k)),
            Method::Semigroup => (1.0 / (hi * e), e / lo),
            Method::Resolvent => (lo / e, hi * e),
        }
    }

    /// One-atom constant `value / λ^{2kθ}`.
    fn constant(&self) -> f64 {
        let (k, th) = (self.k, self.theta);
        match self.method {
            Method::KFunctional => PI / (PI * th).sin(),
            Method::Semigroup => integrate_atoms(self, &[1.0], &[1.0]).0[0],
            Method::Resolvent => beta(2.0 * k * th, 2.0 * k - 2.0 * k * th),
        }
    }
}

/// Per-atom integrals and per-panel totals, weighted by `mass`.
fn integrate_atoms(
    kernel: &Kernel,
    lambdas: &[f64],
    mass: &[f64],
) -> (Vec<f64>, Vec<(f64, f64, f64)>) {
    let lo = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = lambdas.iter().copied().fold(0.0, f64::max);
    let (v0, v1) = kernel.range(lo, hi);
    let panels = (v1 / v0).log2().ceil() as i32;
    let gl = GaussLegendre::<f64>::new(16);
    let mut per_atom = vec![0.0; lambdas.len()];
    let mut trace = Vec::with_capacity(panels as usize);
    for j in 0..panels {
        let a = v0 * 2.0f64.powi(j);
        let b = (2.0 * a).min(v1);
        let mut panel = vec![0.0; lambdas.len()];
        for (v, w) in gl.mapped(a, b) {
            for (p, &l) in panel.iter_mut().zip(lambdas) {
                *p += w * kernel.integrand(v, l);
            }
        }
        let weighted: Vec<f64> = panel.iter().zip(mass).map(|(p, m)| p * m).collect();
        trace.push((a, b, pairwise(&weighted)));
        for (s, p) in per_atom.iter_mut().zip(&panel) {
            *s += p;
        }
    }
    for (s, &l) in per_atom.iter_mut().zip(lambdas) {
        *s += kernel.tails(v0, v1, l);
    }
    (per_atom, trace)
}

/// A characterization integral with its verdict and panel trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralResult {
    pub method: Method,
    /// Integral over the stored atoms; infinite when the verdict is `NonMember`.
    pub value: f64,
    pub verdict: MembershipVerdict,
    /// Value for a unit atom at `λ = 1`; the per-atom result is `constant · λ^{2kθ}`.
    pub constant: f64,
    /// `(v_lo, v_hi, contribution)` per dyadic panel.
    pub panels: Vec<(f64, f64, f64)>,
}

pub type SemigroupIntegralResult = IntegralResult;

impl IntegralResult {
    pub fn is_finite(&self) -> bool {
        !self.verdict.is_non_member()
    }
}

pub fn characterization<T: Real>(
    x: &CoefficientVector<T>,
    pair: &InterpolationPair,
    method: Method,
) -> Result<IntegralResult> {
    check_support(x)?;
    let kernel = Kernel::new(method, pair)?;
    let lambdas: Vec<f64> = x
        .nodes()
        .iter()
        .map(|a| a.lambda.to_f64().unwrap_or(f64::NAN))
        .collect();
    let mass: Vec<f64> = x
        .coeffs()
        .iter()
        .zip(x.nodes())
        .map(|(c, a)| (c.norm_sqr() * a.weight).to_f64().unwrap_or(f64::NAN))
        .collect();
    let (per_atom, panels) = integrate_atoms(&kernel, &lambdas, &mass);
    let terms: Vec<f64> = per_atom.iter().zip(&mass).map(|(p, m)| p * m).collect();
    let total = pairwise(&terms);
    let policy = DivergencePolicy::default();
    let verdict = match x.tail() {
        Tail::Exact => MembershipVerdict::member(total, policy.partial_sums(&terms)),
        _ => policy.classify_terms(&terms),
    };
    Ok(IntegralResult {
        method,
        value: if verdict.is_non_member() {
            f64::INFINITY
        } else {
            total
        },
        verdict,
        constant: kernel.constant(),
        panels,
    })
}

/// `(∫₀^∞ t^{−1−θ} K̃(t, x) dt)^{1/2}` as an [`IntegralResult`] on the squared scale.
pub fn interpolation_norm<T: Real>(
    x: &CoefficientVector<T>,
    pair: &InterpolationPair,
) -> Result<IntegralResult> {
    characterization(x, pair, Method::KFunctional)
}

/// `∫₀^∞ t^{−1−2kθ} ‖(e^{−tA} − I)^k x‖² dt`.
pub fn semigroup_characterization<T: Real>(
    x: &CoefficientVector<T>,
    pair: &InterpolationPair,
) -> Result<SemigroupIntegralResult> {
    characterization(x, pair, Method::Semigroup)
}

/// `∫₀^∞ r^{−1+2kθ} ‖[A(A + r)^{−1}]^k x‖² dr`.
pub fn resolvent_characterization<T: Real>(
    x: &CoefficientVector<T>,
    pair: &InterpolationPair,
) -> Result<IntegralResult> {
    characterization(x, pair, Method::Resolvent)
}

/// `C_{k,θ} = ∫₀^∞ u^{−1−2kθ}(1 − e^{−u})^{2k} du`.
pub fn semigroup_constant(k: u32, theta: f64) -> Result<f64> {
    Ok(Kernel::new(Method::Semigroup, &InterpolationPair::new(k, theta)?)?.constant())
}

/// `B(2kθ, 2k − 2kθ)`.
pub fn resolvent_constant(k: u32, theta: f64) -> Result<f64> {
    Ok(Kernel::new(Method::Resolvent, &InterpolationPair::new(k, theta)?)?.constant())
}

/// All requested characterizations next to direct membership in `dom(A^{kθ})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub pair: InterpolationPair,
    pub direct: MembershipVerdict,
    pub results: Vec<IntegralResult>,
    /// Every determinate verdict matches the direct one.
    pub agree: bool,
}

pub fn compare<T: Real>(
    x: &CoefficientVector<T>,
    pair: &InterpolationPair,
    methods: &[Method],
) -> Result<Comparison> {
    let direct = membership(
        x,
        ScaleIndex::new(T::lit(pair.domain_index()))?,
        &DivergencePolicy::default(),
    );
    let results = methods
        .iter()
        .map(|&m| characterization(x, pair, m))
        .collect::<Result<Vec<_>>>()?;
    let agree = results.iter().all(|r| {
        !r.verdict.is_determinate() || !direct.is_determinate() || r.verdict.status == direct.status
    });
    Ok(Comparison {
        pair: *pair,
        direct,
        results,
        agree,
    })
}

/// `(H, dom(A^β))_{θ,2}` against `dom(A^{θβ})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub beta: f64,
    pub theta: f64,
    pub interpolation: MembershipVerdict,
    pub direct: MembershipVerdict,
    pub finiteness_agrees: Option<bool>,
    /// Squared interpolation norm over `Σ λ^{2θβ}|c|²w`, when both are finite.
    pub ratio: Option<f64>,
    /// `[1/R, R]` with `R` from the one-atom constant.
    pub bracket: (f64, f64),
    pub ratio_in_bracket: Option<bool>,
}

pub fn interpolation_domain_consistency<T: Real>(
    x: &CoefficientVector<T>,
    beta: f64,
    theta: f64,
) -> Result<ConsistencyReport> {
    let pair = InterpolationPair::with_power(beta, theta)?;
    let interp = interpolation_norm(x, &pair)?;
    let s = pair.domain_index();
    let direct = membership(x, ScaleIndex::new(T::lit(s))?, &DivergencePolicy::default());
    let finiteness_agrees = (interp.verdict.is_determinate() && direct.is_determinate())
        .then(|| interp.verdict.status == direct.status);
    let norm_sq = pairwise(&x.weighted_terms(T::lit(s)))
        .to_f64()
        .unwrap_or(f64::NAN);
    let ratio = (interp.verdict.is_member() && direct.is_member() && norm_sq > 0.0)
        .then(|| interp.value / norm_sq);
    let c = interp.constant;
    let r = c.max(1.0 / c) * (1.0 + 1e-3);
    let bracket = (1.0 / r, r);
    Ok(ConsistencyReport {
        beta,
        theta,
        interpolation: interp.verdict,
        direct,
        finiteness_agrees,
        ratio,
        bracket,
        ratio_in_bracket: ratio.map(|q| q >= bracket.0 && q <= bracket.1),
    })
}

/// `t`-nodes and weights of `t^{−1−2θ} dt` on `[t_lo, t_hi]`, dyadic panels.
fn window_nodes(theta: f64, t_lo: f64, t_hi: f64) -> Result<Vec<(f64, f64)>> {
    if !(t_lo > 0.0 && t_lo < t_hi) {
        return Err(Error::Input(format!("window [{t_lo}, {t_hi}] is empty")));
    }
    let mut breaks = vec![t_lo];
    while breaks[breaks.len() - 1] < t_hi {
        let next = (2.0 * breaks[breaks.len() - 1]).min(t_hi);
        breaks.push(next);
    }
    let gl = GaussLegendre::<f64>::new(16);
    Ok(breaks
        .windows(2)
        .flat_map(|w| {
            gl.mapped(w[0], w[1])
                .map(|(t, q)| (t, q * t.powf(-1.0 - 2.0 * theta)))
                .collect::<Vec<_>>()
        })
        .collect())
}

/// `∫ t^{−1−2θ} ‖(e^{−tH} − I) f‖² dt` over a window, from oscillator coefficients.
pub fn oscillator_semigroup_window(
    f: &OscillatorState,
    theta: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<f64> {
    let nodes = window_nodes(theta, t_lo, t_hi)?;
    let terms: Vec<f64> =
        f.a.iter()
            .enumerate()
            .map(|(m, a)| {
                let lambda = 2.0 * m as f64 + 1.0;
                let v: Vec<f64> = nodes
                    .iter()
                    .map(|&(t, w)| w * (-t * lambda).exp_m1().powi(2))
                    .collect();
                a.norm_sqr() * pairwise(&v)
            })
            .collect();
    Ok(pairwise(&terms))
}

/// The same window integral with `e^{−tH}` applied through Mehler's kernel in position space.
pub fn mehler_semigroup_window(
    f: &OscillatorState,
    theta: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<f64> {
    if f.side != Side::Oscillator {
        return Err(Error::Input(
            "Mehler application needs an oscillator-side state".into(),
        ));
    }
    let nodes = window_nodes(theta, t_lo, t_hi)?;
    let half = (2.0 * f.max_degree() as f64 + 1.0).sqrt() + 8.0;
    let gl = GaussLegendre::<f64>::new(16);
    let grid: Vec<(f64, f64)> = refine_breaks(&[-half, half], 0.5)
        .windows(2)
        .flat_map(|w| gl.mapped(w[0], w[1]).collect::<Vec<_>>())
        .collect();
    let values: Vec<_> = grid.iter().map(|&(x, _)| f.eval(x)).collect();
    let mut out = Vec::with_capacity(nodes.len());
    for &(t, wt) in &nodes {
        let mut defect = Vec::with_capacity(grid.len());
        for (i, &(x, wx)) in grid.iter().enumerate() {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for (&(y, wy), v) in grid.iter().zip(&values) {
                acc += v * (wy * mehler_kernel(t, x, y, MehlerSide::Oscillator)?);
            }
            defect.push(wx * (acc - values[i]).norm_sqr());
        }
        out.push(wt * pairwise(&defect));
    }
    Ok(pairwise(&out))
}
