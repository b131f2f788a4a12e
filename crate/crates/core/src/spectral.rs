//! Model multiplication operator, left-definite scale norms and membership.
//!
//! Every operator family in the crate is reduced to a [`SpectralMeasure`] and a
//! [`CoefficientVector`] against it. The scale index `s` labels
//! `H_s = dom(A^{s/2})` with norm `(Σ λ^s |c|² w)^{1/2}`.

use crate::error::{Error, Result};
use crate::quad::{refine_breaks, uniform_breaks, GaussLegendre};
use crate::scalar::Real;
use crate::sum::{cumulative, pairwise};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Scale exponent `s ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ScaleIndex<T>(T);

impl<T: Real> ScaleIndex<T> {
    pub fn new(s: T) -> Result<Self> {
        if !s.is_finite() || s < T::zero() {
            return Err(Error::Input(format!(
                "scale index must be finite and >= 0, got {s}"
            )));
        }
        Ok(Self(s))
    }

    pub fn get(self) -> T {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom<T> {
    pub lambda: T,
    pub weight: T,
}

/// Panel guidance for continuous measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureHint<T> {
    pub panels: usize,
    /// Upper bound on a panel width, from the oscillation of the eigenfunctions.
    pub oscillation_scale: T,
}

/// Named continuous families, kept so measures can be serialized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Halfline { alpha: f64 },
    Bessel { gamma: f64 },
    Custom,
}

pub type Density<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Clone)]
pub struct ContinuousMeasure<T: Real> {
    density: Density<T>,
    lo: T,
    hi: T,
    hint: QuadratureHint<T>,
    family: Family,
    shift: T,
}

impl<T: Real> ContinuousMeasure<T> {
    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn hint(&self) -> QuadratureHint<T> {
        self.hint
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn shift(&self) -> T {
        self.shift
    }

    pub fn density(&self, lambda: T) -> T {
        if lambda < self.lo || lambda >= self.hi {
            T::zero()
        } else {
            (self.density)(lambda)
        }
    }
}

#[derive(Clone)]
pub enum SpectralMeasure<T: Real> {
    Discrete(Vec<Atom<T>>),
    Continuous(ContinuousMeasure<T>),
}

impl<T: Real> fmt::Debug for SpectralMeasure<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Discrete(a) => f.debug_tuple("Discrete").field(&a.len()).finish(),
            Self::Continuous(c) => f
                .debug_struct("Continuous")
                .field("lo", &c.lo)
                .field("hi", &c.hi)
                .field("family", &c.family)
                .finish(),
        }
    }
}

impl<T: Real> SpectralMeasure<T> {
    pub fn discrete(atoms: Vec<Atom<T>>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Input(
                "discrete measure needs at least one atom".into(),
            ));
        }
        for (i, a) in atoms.iter().enumerate() {
            if !a.lambda.is_finite() {
                return Err(Error::Input(format!("atom {i}: eigenvalue not finite")));
            }
            if !(a.weight > T::zero()) || !a.weight.is_finite() {
                return Err(Error::Input(format!(
                    "atom {i}: weight must be finite and > 0"
                )));
            }
        }
        Ok(Self::Discrete(atoms))
    }

    /// Atoms `λ_n = f(n)` for `n = 1..=count`, unit weights.
    pub fn lattice<F: Fn(usize) -> T>(count: usize, f: F) -> Result<Self> {
        Self::discrete(
            (1..=count)
                .map(|n| Atom {
                    lambda: f(n),
                    weight: T::one(),
                })
                .collect(),
        )
    }

    pub fn continuous(density: Density<T>, lo: T, hi: T, hint: QuadratureHint<T>) -> Result<Self> {
        Self::continuous_family(density, lo, hi, hint, Family::Custom)
    }

    pub fn continuous_family(
        density: Density<T>,
        lo: T,
        hi: T,
        hint: QuadratureHint<T>,
        family: Family,
    ) -> Result<Self> {
        if !(lo >= T::zero()) || !(hi > lo) {
            return Err(Error::Input(format!(
                "continuous support [{lo}, {hi}) must lie in [0, ∞)"
            )));
        }
        if hint.panels == 0 || !(hint.oscillation_scale > T::zero()) {
            return Err(Error::Input("quadrature hint must be positive".into()));
        }
        let probe_hi = if hi.is_finite() { hi } else { lo + T::lit(1e4) };
        for x in uniform_breaks(lo, probe_hi, 64).into_iter().take(64) {
            let d = density(x);
            if d < T::zero() || d.is_nan() {
                return Err(Error::Input(format!("density negative or NaN at λ = {x}")));
            }
        }
        Ok(Self::Continuous(ContinuousMeasure {
            density,
            lo,
            hi,
            hint,
            family,
            shift: T::zero(),
        }))
    }

    /// The measure of `I + A`: every support point moves from λ to λ + 1.
    pub fn shifted_by_identity(&self) -> Self {
        match self {
            Self::Discrete(atoms) => Self::Discrete(
                atoms
                    .iter()
                    .map(|a| Atom {
                        lambda: a.lambda + T::one(),
                        weight: a.weight,
                    })
                    .collect(),
            ),
            Self::Continuous(c) => {
                let inner = c.density.clone();
                Self::Continuous(ContinuousMeasure {
                    density: Arc::new(move |l| inner(l - T::one())),
                    lo: c.lo + T::one(),
                    hi: c.hi + T::one(),
                    hint: c.hint,
                    family: c.family,
                    shift: c.shift + T::one(),
                })
            }
        }
    }

    pub fn min_support(&self) -> T {
        match self {
            Self::Discrete(a) => a.iter().map(|a| a.lambda).fold(T::infinity(), T::min),
            Self::Continuous(c) => c.lo,
        }
    }

    pub fn max_support(&self) -> T {
        match self {
            Self::Discrete(a) => a.iter().map(|a| a.lambda).fold(T::neg_infinity(), T::max),
            Self::Continuous(c) => c.hi,
        }
    }

    pub fn is_left_definite(&self) -> bool {
        self.min_support() >= T::one()
    }

    pub fn atoms(&self) -> Option<&[Atom<T>]> {
        match self {
            Self::Discrete(a) => Some(a),
            Self::Continuous(_) => None,
        }
    }

    fn require_left_definite(&self) -> Result<()> {
        if self.is_left_definite() {
            Ok(())
        } else {
            Err(Error::Normalization(format!(
                "support point {} < 1; use shifted_by_identity",
                self.min_support()
            )))
        }
    }
}

/// Behaviour of the coefficients beyond the stored truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail<T> {
    /// Coefficients vanish beyond the truncation.
    Exact,
    /// Stored entries are a truncation of an unknown infinite sequence.
    Truncated,
    /// `w_n |c_n|² ≈ amplitude · n^{−decay}` and `λ_n ≈ scale · n^{growth}` past the truncation.
    Model(TailModel<T>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel<T> {
    pub amplitude: T,
    pub decay: T,
    pub growth: T,
    pub scale: T,
}

impl<T: Real> TailModel<T> {
    /// Exponent of the weighted tail terms `n^{growth·s − decay}`.
    pub fn term_exponent(&self, s: T) -> T {
        self.growth * s - self.decay
    }

    /// Bound on Σ_{n>N} λ_n^s w_n |c_n|², infinite when the tail diverges.
    pub fn remainder(&self, s: T, n: usize) -> T {
        let e = self.term_exponent(s);
        if e >= -T::one() {
            return T::infinity();
        }
        let nf = T::from_usize_lossy(n.max(1));
        self.amplitude * self.scale.powf(s) * nf.powf(e + T::one()) / (-(e + T::one()))
    }
}

#[derive(Clone)]
pub struct CoefficientVector<T: Real> {
    measure: Arc<SpectralMeasure<T>>,
    coeffs: Vec<Complex<T>>,
    nodes: Vec<Atom<T>>,
    truncation: usize,
    tail: Tail<T>,
}

impl<T: Real> fmt::Debug for CoefficientVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientVector")
            .field("measure", &self.measure)
            .field("len", &self.coeffs.len())
            .field("truncation", &self.truncation)
            .field("tail", &self.tail)
            .finish()
    }
}

impl<T: Real> CoefficientVector<T> {
    /// Coefficients aligned with the first `coeffs.len()` atoms of a discrete measure.
    pub fn discrete(
        measure: Arc<SpectralMeasure<T>>,
        coeffs: Vec<Complex<T>>,
        tail: Tail<T>,
    ) -> Result<Self> {
        let atoms = measure
            .atoms()
            .ok_or_else(|| Error::Input("discrete coefficients need a discrete measure".into()))?;
        if coeffs.len() > atoms.len() {
            return Err(Error::Input(format!(
                "{} coefficients for {} atoms",
                coeffs.len(),
                atoms.len()
            )));
        }
        let nodes = atoms[..coeffs.len()].to_vec();
        let truncation = coeffs.len();
        Ok(Self {
            measure,
            coeffs,
            nodes,
            truncation,
            tail,
        })
    }

    /// Real coefficients `c(λ_n, n)` on every atom, as a truncation of an infinite sequence.
    pub fn from_fn<F: Fn(T, usize) -> T>(measure: Arc<SpectralMeasure<T>>, f: F) -> Result<Self> {
        let atoms = measure
            .atoms()
            .ok_or_else(|| Error::Input("from_fn needs a discrete measure".into()))?;
        let coeffs = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| Complex::new(f(a.lambda, i + 1), T::zero()))
            .collect();
        Self::discrete(measure, coeffs, Tail::Truncated)
    }

    /// Samples `f(λ)` on Gauss–Legendre panels over `[lo, hi)` of a continuous measure.
    pub fn sample<F: Fn(T) -> Complex<T>>(
        measure: Arc<SpectralMeasure<T>>,
        hi: T,
        f: F,
    ) -> Result<Self> {
        let c = match measure.as_ref() {
            SpectralMeasure::Continuous(c) => c.clone(),
            SpectralMeasure::Discrete(_) => {
                return Err(Error::Input("sample needs a continuous measure".into()))
            }
        };
        let top = if hi < c.hi { hi } else { c.hi };
        if !top.is_finite() {
            return Err(Error::Input("sampling window must be finite".into()));
        }
        let breaks = refine_breaks(
            &uniform_breaks(c.lo, top, c.hint.panels),
            c.hint.oscillation_scale,
        );
        let gl = GaussLegendre::<T>::new(8);
        let mut nodes = Vec::new();
        let mut coeffs = Vec::new();
        for w in breaks.windows(2) {
            for (x, q) in gl.mapped(w[0], w[1]) {
                nodes.push(Atom {
                    lambda: x,
                    weight: q * c.density(x),
                });
                coeffs.push(f(x));
            }
        }
        let truncation = coeffs.len();
        Ok(Self {
            measure,
            coeffs,
            nodes,
            truncation,
            tail: Tail::Truncated,
        })
    }

    pub fn with_tail(mut self, tail: Tail<T>) -> Self {
        self.tail = tail;
        self
    }

    pub fn measure(&self) -> &Arc<SpectralMeasure<T>> {
        &self.measure
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// (λ, quadrature weight) aligned with [`Self::coeffs`].
    pub fn nodes(&self) -> &[Atom<T>] {
        &self.nodes
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn tail(&self) -> Tail<T> {
        self.tail
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading `n` entries as a truncated vector.
    pub fn truncate(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Self {
            measure: self.measure.clone(),
            coeffs: self.coeffs[..n].to_vec(),
            nodes: self.nodes[..n].to_vec(),
            truncation: n,
            tail: if n == self.len() {
                self.tail
            } else {
                Tail::Truncated
            },
        }
    }

    /// Coefficients multiplied entrywise by `g(λ)`.
    pub fn map_lambda<F: Fn(T) -> T>(&self, g: F) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&self.nodes)
            .map(|(c, a)| *c * g(a.lambda))
            .collect();
        Self {
            measure: self.measure.clone(),
            coeffs,
            nodes: self.nodes.clone(),
            truncation: self.truncation,
            tail: Tail::Truncated,
        }
    }

    fn check_finite(&self) -> Result<()> {
        match self
            .coeffs
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            Some(i) => Err(Error::Input(format!("coefficient {i} is not finite"))),
            None => Ok(()),
        }
    }

    /// λ^s w |c|² per stored entry.
    pub fn weighted_terms(&self, s: T) -> Vec<T> {
        self.coeffs
            .iter()
            .zip(&self.nodes)
            .map(|(c, a)| {
                let p = if s == T::zero() {
                    T::one()
                } else {
                    a.lambda.powf(s)
                };
                p * a.weight * c.norm_sqr()
            })
            .collect()
    }

    /// Plain ℓ²(μ)/L²(μ) norm; no normalization requirement.
    pub fn l2_norm(&self) -> T {
        pairwise(&self.weighted_terms(T::zero())).sqrt()
    }
}

/// `(Σ λ^s |c|² w)^{1/2}` over the stored entries.
pub fn scale_norm<T: Real>(f: &CoefficientVector<T>, s: ScaleIndex<T>) -> Result<T> {
    scale_norm_with_bound(f, s).map(|(v, _)| v)
}

/// Norm together with the truncation-error bound of a tail model, when present.
pub fn scale_norm_with_bound<T: Real>(
    f: &CoefficientVector<T>,
    s: ScaleIndex<T>,
) -> Result<(T, Option<T>)> {
    f.measure.require_left_definite()?;
    f.check_finite()?;
    let sq = pairwise(&f.weighted_terms(s.get()));
    let bound = match f.tail {
        Tail::Model(m) => {
            let rem = m.remainder(s.get(), f.len());
            Some((sq + rem).sqrt() - sq.sqrt())
        }
        _ => None,
    };
    Ok((sq.sqrt(), bound))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MembershipStatus {
    Member,
    NonMember,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub status: MembershipStatus,
    pub norm_estimate: Option<f64>,
    pub divergence_exponent: Option<f64>,
    pub partial_sums: Vec<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl MembershipVerdict {
    pub fn member(norm_sq: f64, partial_sums: Vec<(f64, f64)>) -> Self {
        Self {
            status: MembershipStatus::Member,
            norm_estimate: Some(norm_sq.max(0.0).sqrt()),
            divergence_exponent: None,
            partial_sums,
            diagnostic: None,
        }
    }

    pub fn non_member(exponent: f64, partial_sums: Vec<(f64, f64)>) -> Self {
        Self {
            status: MembershipStatus::NonMember,
            norm_estimate: None,
            divergence_exponent: Some(exponent),
            partial_sums,
            diagnostic: None,
        }
    }

    pub fn indeterminate(why: impl Into<String>, partial_sums: Vec<(f64, f64)>) -> Self {
        Self {
            status: MembershipStatus::Indeterminate,
            norm_estimate: None,
            divergence_exponent: None,
            partial_sums,
            diagnostic: Some(why.into()),
        }
    }

    pub fn with_diagnostic(mut self, d: impl Into<String>) -> Self {
        self.diagnostic = Some(d.into());
        self
    }

    pub fn is_member(&self) -> bool {
        self.status == MembershipStatus::Member
    }

    pub fn is_non_member(&self) -> bool {
        self.status == MembershipStatus::NonMember
    }

    pub fn is_determinate(&self) -> bool {
        self.status != MembershipStatus::Indeterminate
    }
}

/// Log-log partial-sum classifier shared by every module.
///
/// Checkpoints are geometric. The growth slope `σ` of `ln S_N` against `ln N`
/// over the last `fit_points` checkpoints flags divergence. The block slope
/// `e` of `ln (S_{N_k} − S_{N_{k−1}})` against `ln N_k` recognizes convergent
/// power tails (`e < 0`) that are still too heavy for the tail-increment test.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergencePolicy {
    pub checkpoints: Vec<usize>,
    pub fit_points: usize,
    pub diverge_slope: f64,
    pub converge_slope: f64,
    pub tail_rel: f64,
    pub block_decay: f64,
}

impl Default for DivergencePolicy {
    fn default() -> Self {
        Self::dyadic(4, 14)
    }
}

impl DivergencePolicy {
    /// Checkpoints `2^lo, …, 2^hi` with the default thresholds.
    pub fn dyadic(lo: u32, hi: u32) -> Self {
        Self {
            checkpoints: (lo..=hi).map(|k| 1usize << k).collect(),
            fit_points: 5,
            diverge_slope: 0.05,
            converge_slope: 0.005,
            tail_rel: 1e-8,
            block_decay: 0.05,
        }
    }

    pub fn max_checkpoint(&self) -> usize {
        *self.checkpoints.last().unwrap_or(&0)
    }

    /// Partial sums of `terms` at the checkpoints that fit inside the slice.
    pub fn partial_sums(&self, terms: &[f64]) -> Vec<(f64, f64)> {
        let cum = cumulative(terms);
        self.checkpoints
            .iter()
            .filter(|&&n| n <= cum.len() && n > 0)
            .map(|&n| (n as f64, cum[n - 1]))
            .collect()
    }

    pub fn classify_terms(&self, terms: &[f64]) -> MembershipVerdict {
        self.classify(self.partial_sums(terms))
    }

    pub fn classify(&self, partial: Vec<(f64, f64)>) -> MembershipVerdict {
        let need = self.fit_points + 1;
        if partial.len() < need {
            return MembershipVerdict::indeterminate(
                format!(
                    "{} truncation points, slope fit needs {need}",
                    partial.len()
                ),
                partial,
            );
        }
        if partial.iter().any(|&(_, s)| !s.is_finite() || s < 0.0) {
            return MembershipVerdict::indeterminate("non-finite or negative partial sum", partial);
        }
        let last = partial[partial.len() - 1].1;
        if last == 0.0 {
            return MembershipVerdict::member(0.0, partial);
        }
        let window = &partial[partial.len() - need..];
        let fit = &window[1..];
        let sigma = if fit.iter().any(|&(_, s)| s <= 0.0) {
            f64::INFINITY
        } else {
            slope(fit.iter().map(|&(n, s)| (n.ln(), s.ln())))
        };
        let blocks: Vec<(f64, f64)> = window
            .windows(2)
            .map(|w| (w[1].0, (w[1].1 - w[0].1).max(0.0)))
            .collect();
        let last_block = blocks[blocks.len() - 1].1;
        let rel_inc = last_block / last;
        if sigma < self.converge_slope && rel_inc < self.tail_rel {
            return MembershipVerdict::member(last, partial);
        }
        let positive: Vec<(f64, f64)> = blocks.iter().copied().filter(|&(_, d)| d > 0.0).collect();
        let k = blocks.len();
        let ratio = window[need - 1].0 / window[need - 2].0;
        let trend =
            (positive.len() >= 3 && blocks[k - 1].1 > 0.0 && blocks[k - 2].1 > 0.0).then(|| {
                let e = slope(positive.iter().map(|&(n, d)| (n.ln(), d.ln())));
                (e, (blocks[k - 1].1 / blocks[k - 2].1).ln() / ratio.ln())
            });
        if let Some((e, e_last)) = trend {
            let decreasing = blocks[k - 1].1 < blocks[k - 2].1 && blocks[k - 2].1 < blocks[k - 3].1;
            // A decay that fades toward exponent 0 is a slowly settling divergence.
            let sustained = e_last < -self.block_decay && e_last <= 0.5 * e;
            if e < -self.block_decay && decreasing && sustained {
                let r = ratio.powf(e);
                let remainder = last_block * r / (1.0 - r);
                let mut v = MembershipVerdict::member(last + remainder, partial);
                v.diagnostic = Some(format!("power tail, block exponent {e:.4}"));
                return v;
            }
        }
        if sigma > self.diverge_slope {
            // Growth that is fading toward a flat tail is not yet a divergence.
            if let Some((e, e_last)) =
                trend.filter(|&(e, e_last)| e > self.block_decay && e_last < 0.5 * e)
            {
                return MembershipVerdict::indeterminate(
                    format!("block growth fading: exponent {e:.4}, last {e_last:.4}"),
                    partial,
                );
            }
            return MembershipVerdict::non_member(sigma, partial);
        }
        MembershipVerdict::indeterminate(format!("slope {sigma:.4} inconclusive"), partial)
    }
}

/// Membership predicted from a structural characterization rather than a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Prediction {
    PredictedMember,
    PredictedNonMember,
}

impl Prediction {
    pub fn from_bool(member: bool) -> Self {
        if member {
            Self::PredictedMember
        } else {
            Self::PredictedNonMember
        }
    }

    pub fn is_member(self) -> bool {
        self == Self::PredictedMember
    }

    /// Whether a determinate verdict agrees; `None` when the verdict is indeterminate.
    pub fn agrees_with(self, v: &MembershipVerdict) -> Option<bool> {
        v.is_determinate()
            .then(|| v.is_member() == self.is_member())
    }
}

/// Least-squares slope of the (x, y) pairs.
pub(crate) fn slope<I: Iterator<Item = (f64, f64)>>(pts: I) -> f64 {
    let pts: Vec<(f64, f64)> = pts.collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Decides whether `Σ λ^s |c|² w` converges.
pub fn membership<T: Real>(
    f: &CoefficientVector<T>,
    s: ScaleIndex<T>,
    policy: &DivergencePolicy,
) -> MembershipVerdict {
    if let Err(e) = f.check_finite() {
        return MembershipVerdict::indeterminate(e.to_string(), Vec::new());
    }
    let terms: Vec<f64> = f
        .weighted_terms(s.get())
        .into_iter()
        .map(|t| t.to_f64().unwrap_or(f64::NAN))
        .collect();
    let partial = policy.partial_sums(&terms);
    let total = pairwise(&terms);
    match f.tail {
        Tail::Exact => MembershipVerdict::member(total, partial),
        Tail::Model(m) if partial.len() <= policy.fit_points => {
            let e = m.term_exponent(s.get()).to_f64().unwrap_or(f64::NAN) + 1.0;
            if e < -policy.block_decay {
                let rem = m
                    .remainder(s.get(), f.len())
                    .to_f64()
                    .unwrap_or(f64::INFINITY);
                MembershipVerdict::member(total + rem, partial)
            } else if e > policy.diverge_slope {
                MembershipVerdict::non_member(e, partial)
            } else {
                MembershipVerdict::indeterminate(
                    format!("tail model exponent {e:.4} at threshold"),
                    partial,
                )
            }
        }
        _ => policy.classify(partial),
    }
}

/// `A_r` acting on `f`: multiplication by λ, after checking `f ∈ dom(A_r) = H_{r+2}`.
pub fn apply_left_definite_operator<T: Real>(
    f: &CoefficientVector<T>,
    r: ScaleIndex<T>,
    policy: &DivergencePolicy,
) -> Result<CoefficientVector<T>> {
    f.measure.require_left_definite()?;
    let up = ScaleIndex::new(r.get() + T::lit(2.0))?;
    let v = membership(f, up, policy);
    if !v.is_member() {
        return Err(Error::Domain(format!(
            "vector not in dom(A_r): membership at index {} is {:?}",
            up.get(),
            v.status
        )));
    }
    let mut g = f.map_lambda(|l| l);
    g.tail = match f.tail {
        Tail::Model(m) => Tail::Model(TailModel {
            amplitude: m.amplitude * m.scale * m.scale,
            decay: m.decay - T::lit(2.0) * m.growth,
            ..m
        }),
        other => other,
    };
    Ok(g)
}

/// A vector in `H_r \ H_s`, self-checked against both memberships.
///
/// Entries are chosen so that `λ_n^s w_n |c_n|² = 1/n` in increasing-λ order;
/// the `r`-series then converges exactly when the eigenvalues grow.
pub fn strict_inclusion_witness<T: Real>(
    mu: Arc<SpectralMeasure<T>>,
    r: T,
    s: T,
    policy: &DivergencePolicy,
) -> Result<CoefficientVector<T>> {
    if !(r >= T::zero() && r < s) {
        return Err(Error::Input(format!(
            "need 0 <= r < s, got r = {r}, s = {s}"
        )));
    }
    mu.require_left_definite()?;
    let atoms = mu
        .atoms()
        .ok_or_else(|| Error::Input("witness construction needs a discrete measure".into()))?;
    if atoms.len() < policy.max_checkpoint() {
        return Err(Error::Input(format!(
            "{} atoms, policy needs {}",
            atoms.len(),
            policy.max_checkpoint()
        )));
    }
    if atoms.windows(2).any(|w| w[1].lambda < w[0].lambda) {
        return Err(Error::Input(
            "atoms must be listed in increasing order".into(),
        ));
    }
    let coeffs: Vec<Complex<T>> = atoms
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let n = T::from_usize_lossy(i + 1);
            Complex::new(
                (T::one() / (n * a.weight * a.lambda.powf(s))).sqrt(),
                T::zero(),
            )
        })
        .collect();
    let w = CoefficientVector::discrete(mu.clone(), coeffs, Tail::Truncated)?;
    let in_r = membership(&w, ScaleIndex::new(r)?, policy);
    let in_s = membership(&w, ScaleIndex::new(s)?, policy);
    if in_r.is_member() && in_s.is_non_member() {
        Ok(w)
    } else {
        Err(Error::OperatorBounded(format!(
            "no witness: H_{r} verdict {:?}, H_{s} verdict {:?} (eigenvalues do not grow)",
            in_r.status, in_s.status
        )))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomSpec {
    pub lambda: f64,
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub count: usize,
    #[serde(default = "one")]
    pub power: f64,
}

/// JSON form of a measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MeasureSpec {
    Discrete {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        atoms: Vec<AtomSpec>,
        /// Shorthand for atoms `λ_n = n^power`, `n = 1..=count`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lattice: Option<LatticeSpec>,
    },
    Continuous {
        family: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma: Option<f64>,
        #[serde(default)]
        shift: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hi: Option<f64>,
    },
}

impl MeasureSpec {
    pub fn build(&self) -> Result<SpectralMeasure<f64>> {
        match self {
            MeasureSpec::Discrete { atoms, lattice } => match (atoms.is_empty(), lattice) {
                (false, None) => SpectralMeasure::discrete(
                    atoms
                        .iter()
                        .map(|a| Atom {
                            lambda: a.lambda,
                            weight: a.weight,
                        })
                        .collect(),
                ),
                (true, Some(l)) => {
                    let p = l.power;
                    SpectralMeasure::lattice(l.count, move |n| (n as f64).powf(p))
                }
                _ => Err(Error::Input(
                    "discrete measure needs exactly one of atoms / lattice".into(),
                )),
            },
            MeasureSpec::Continuous {
                family,
                alpha,
                gamma,
                shift,
                hi,
            } => {
                use crate::halfline::EigenTransform as _;
                let base = match family.as_str() {
                    "halfline" => {
                        let a = alpha
                            .ok_or_else(|| Error::Input("halfline family needs alpha".into()))?;
                        crate::halfline::HalflineOperator::new(a)?
                            .spectral_measure(hi.unwrap_or(f64::INFINITY))?
                    }
                    "bessel" => {
                        let g = gamma
                            .ok_or_else(|| Error::Input("bessel family needs gamma".into()))?;
                        crate::halfline::BesselOperator::new(g)?
                            .spectral_measure(hi.unwrap_or(f64::INFINITY))?
                    }
                    other => {
                        return Err(Error::Input(format!("unknown continuous family '{other}'")))
                    }
                };
                let steps = shift.round();
                if (steps - shift).abs() > 1e-12 || steps < 0.0 {
                    return Err(Error::Input("shift must be a nonnegative integer".into()));
                }
                let mut m = base;
                for _ in 0..steps as usize {
                    m = m.shifted_by_identity();
                }
                Ok(m)
            }
        }
    }

    pub fn from_measure(m: &SpectralMeasure<f64>) -> Result<Self> {
        match m {
            SpectralMeasure::Discrete(atoms) => Ok(MeasureSpec::Discrete {
                atoms: atoms
                    .iter()
                    .map(|a| AtomSpec {
                        lambda: a.lambda,
                        weight: a.weight,
                    })
                    .collect(),
                lattice: None,
            }),
            SpectralMeasure::Continuous(c) => {
                let hi = if c.hi.is_finite() {
                    Some(c.hi - c.shift)
                } else {
                    None
                };
                match c.family {
                    Family::Halfline { alpha } => Ok(MeasureSpec::Continuous {
                        family: "halfline".into(),
                        alpha: Some(alpha),
                        gamma: None,
                        shift: c.shift,
                        hi,
                    }),
                    Family::Bessel { gamma } => Ok(MeasureSpec::Continuous {
                        family: "bessel".into(),
                        alpha: None,
                        gamma: Some(gamma),
                        shift: c.shift,
                        hi,
                    }),
                    Family::Custom => Err(Error::Capability(
                        "custom densities are not serializable".into(),
                    )),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TailSpec {
    Exact,
    Truncated,
    Model {
        amplitude: f64,
        decay: f64,
        #[serde(default = "one")]
        growth: f64,
        #[serde(default = "one")]
        scale: f64,
    },
}

/// JSON form of a coefficient vector. `measure` is an inline measure object or
/// a reference string resolved by the caller.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorSpec {
    pub measure: serde_json::Value,
    pub coeffs: Vec<[f64; 2]>,
    pub truncation: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailSpec>,
    /// λ grid for continuous measures (trapezoid weights against the density).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
}

impl VectorSpec {
    pub fn build<R>(&self, resolve: R) -> Result<CoefficientVector<f64>>
    where
        R: Fn(&str) -> Result<MeasureSpec>,
    {
        let spec = match &self.measure {
            serde_json::Value::String(name) => resolve(name)?,
            v => serde_json::from_value::<MeasureSpec>(v.clone())
                .map_err(|e| Error::Input(format!("measure: {e}")))?,
        };
        let measure = Arc::new(spec.build()?);
        let mut coeffs: Vec<Complex<f64>> = self
            .coeffs
            .iter()
            .map(|c| Complex::new(c[0], c[1]))
            .collect();
        if self.truncation < coeffs.len() {
            coeffs.truncate(self.truncation);
        }
        let tail = match self.tail.clone().unwrap_or(TailSpec::Truncated) {
            TailSpec::Exact => Tail::Exact,
            TailSpec::Truncated => Tail::Truncated,
            TailSpec::Model {
                amplitude,
                decay,
                growth,
                scale,
            } => Tail::Model(TailModel {
                amplitude,
                decay,
                growth,
                scale,
            }),
        };
        match measure.as_ref() {
            SpectralMeasure::Discrete(_) => CoefficientVector::discrete(measure, coeffs, tail),
            SpectralMeasure::Continuous(c) => {
                let grid = self
                    .grid
                    .as_ref()
                    .ok_or_else(|| Error::Input("continuous vectors need a grid".into()))?;
                if grid.len() != coeffs.len() || grid.len() < 2 {
                    return Err(Error::Input("grid and coeffs lengths differ".into()));
                }
                let nodes = grid
                    .iter()
                    .enumerate()
                    .map(|(i, &l)| {
                        let left = if i == 0 { 0.0 } else { l - grid[i - 1] };
                        let right = if i + 1 == grid.len() {
                            0.0
                        } else {
                            grid[i + 1] - l
                        };
                        Atom {
                            lambda: l,
                            weight: 0.5 * (left + right) * c.density(l),
                        }
                    })
                    .collect();
                let truncation = coeffs.len();
                Ok(CoefficientVector {
                    measure,
                    coeffs,
                    nodes,
                    truncation,
                    tail,
                })
            }
        }
    }

    pub fn from_vector(v: &CoefficientVector<f64>) -> Result<Self> {
        let measure = serde_json::to_value(MeasureSpec::from_measure(v.measure())?)
            .map_err(|e| Error::Input(e.to_string()))?;
        let grid = match v.measure().as_ref() {
            SpectralMeasure::Continuous(_) => Some(v.nodes().iter().map(|a| a.lambda).collect()),
            SpectralMeasure::Discrete(_) => None,
        };
        let tail = match v.tail() {
            Tail::Exact => TailSpec::Exact,
            Tail::Truncated => TailSpec::Truncated,
            Tail::Model(m) => TailSpec::Model {
                amplitude: m.amplitude,
                decay: m.decay,
                growth: m.growth,
                scale: m.scale,
            },
        };
        Ok(Self {
            measure,
            coeffs: v.coeffs().iter().map(|c| [c.re, c.im]).collect(),
            truncation: v.truncation(),
            tail: Some(tail),
            grid,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lattice(n: usize) -> Arc<SpectralMeasure<f64>> {
        Arc::new(SpectralMeasure::lattice(n, |k| k as f64).unwrap())
    }

    fn real(v: &[f64]) -> Vec<Complex<f64>> {
        v.iter().map(|&x| Complex::new(x, 0.0)).collect()
    }

    fn s(x: f64) -> ScaleIndex<f64> {
        ScaleIndex::new(x).unwrap()
    }

    #[test]
    fn single_atom_norm() {
        let m = Arc::new(
            SpectralMeasure::discrete(vec![Atom {
                lambda: 1.0,
                weight: 1.0,
            }])
            .unwrap(),
        );
        let f = CoefficientVector::discrete(m, real(&[1.0]), Tail::Exact).unwrap();
        assert_eq!(scale_norm(&f, s(2.0)).unwrap(), 1.0);
    }

    #[test]
    fn harmonic_coefficients_norms() {
        let c: Vec<f64> = (1..=10).map(|n| 1.0 / n as f64).collect();
        let f = CoefficientVector::discrete(lattice(10), real(&c), Tail::Exact).unwrap();
        let oracle: f64 = (1..=10).map(|n| 1.0 / (n * n) as f64).sum::<f64>().sqrt();
        assert!((scale_norm(&f, s(0.0)).unwrap() - oracle).abs() < 1e-15);
        assert!((scale_norm(&f, s(2.0)).unwrap() - 10f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rejects_support_below_one_and_nan() {
        let m = Arc::new(
            SpectralMeasure::discrete(vec![Atom {
                lambda: 0.5,
                weight: 1.0,
            }])
            .unwrap(),
        );
        let f = CoefficientVector::discrete(m.clone(), real(&[1.0]), Tail::Exact).unwrap();
        assert!(matches!(
            scale_norm(&f, s(1.0)),
            Err(Error::Normalization(_))
        ));
        let shifted = Arc::new(m.shifted_by_identity());
        let g = CoefficientVector::discrete(shifted.clone(), real(&[1.0]), Tail::Exact).unwrap();
        assert!((scale_norm(&g, s(1.0)).unwrap() - 1.5f64.sqrt()).abs() < 1e-15);
        let h = CoefficientVector::discrete(shifted, real(&[f64::NAN]), Tail::Exact).unwrap();
        assert!(matches!(scale_norm(&h, s(1.0)), Err(Error::Input(_))));
        assert!(ScaleIndex::new(-1.0).is_err());
        assert!(SpectralMeasure::discrete(vec![Atom {
            lambda: 1.0,
            weight: 0.0
        }])
        .is_err());
    }

    #[test]
    fn membership_examples() {
        let p = DivergencePolicy::default();
        let m = lattice(1 << 14);
        let geo = CoefficientVector::from_fn(m.clone(), |_, n| 0.5f64.powi(n as i32)).unwrap();
        for sv in [0.0, 1.0, 5.0] {
            assert!(membership(&geo, s(sv), &p).is_member());
        }
        let harm = CoefficientVector::from_fn(m, |_, n| 1.0 / n as f64).unwrap();
        let v = membership(&harm, s(1.0), &p);
        assert!(v.is_non_member(), "{v:?}");
        assert!(v.divergence_exponent.unwrap() > p.diverge_slope);
        let v = membership(&harm, s(0.5), &p);
        assert!(v.is_member(), "{v:?}");
        // ζ(3/2) = 2.6123753486854883
        assert!((v.norm_estimate.unwrap().powi(2) - 2.612_375_348_685_488).abs() < 1e-3);
    }

    #[test]
    fn too_few_points_is_indeterminate() {
        let f = CoefficientVector::from_fn(lattice(100), |_, n| 1.0 / n as f64).unwrap();
        let v = membership(&f, s(1.0), &DivergencePolicy::default());
        assert_eq!(v.status, MembershipStatus::Indeterminate);
        assert!(v.diagnostic.unwrap().contains("truncation points"));
    }

    #[test]
    fn tail_model_decides_short_vectors() {
        let f = CoefficientVector::from_fn(lattice(10), |_, n| 1.0 / n as f64)
            .unwrap()
            .with_tail(Tail::Model(TailModel {
                amplitude: 1.0,
                decay: 2.0,
                growth: 1.0,
                scale: 1.0,
            }));
        let p = DivergencePolicy::default();
        assert!(membership(&f, s(0.5), &p).is_member());
        assert!(membership(&f, s(1.5), &p).is_non_member());
        let (_, bound) = scale_norm_with_bound(&f, s(0.5)).unwrap();
        assert!(bound.unwrap() > 0.0);
    }

    #[test]
    fn left_definite_operator_examples() {
        let p = DivergencePolicy::default();
        let m = Arc::new(
            SpectralMeasure::discrete(vec![Atom {
                lambda: 3.0,
                weight: 1.0,
            }])
            .unwrap(),
        );
        let f = CoefficientVector::discrete(m, real(&[1.0]), Tail::Exact).unwrap();
        let g = apply_left_definite_operator(&f, s(0.0), &p).unwrap();
        assert_eq!(g.coeffs()[0].re, 3.0);

        let mut e = vec![0.0; 8];
        e[4] = 1.0;
        let f = CoefficientVector::discrete(lattice(8), real(&e), Tail::Exact).unwrap();
        for r in [0.0, 1.5, 4.0] {
            let g = apply_left_definite_operator(&f, s(r), &p).unwrap();
            assert_eq!(g.coeffs()[4].re, 5.0);
            assert!(g
                .coeffs()
                .iter()
                .enumerate()
                .all(|(i, c)| i == 4 || c.re == 0.0));
        }

        let f = CoefficientVector::from_fn(lattice(1 << 14), |l, _| l.powi(-3)).unwrap();
        let g = apply_left_definite_operator(&f, s(0.0), &p).unwrap();
        let n0 = scale_norm(&g, s(0.0)).unwrap();
        let pi4 = std::f64::consts::PI.powi(4) / 90.0;
        assert!((n0 * n0 - pi4).abs() < 1e-10);
        let n2 = scale_norm(&f, s(2.0)).unwrap();
        assert!((n0 - n2).abs() < 1e-14);

        let h = CoefficientVector::from_fn(lattice(1 << 14), |l, _| 1.0 / l).unwrap();
        assert!(matches!(
            apply_left_definite_operator(&h, s(0.0), &p),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn witness_examples() {
        let p = DivergencePolicy::default();
        let w = strict_inclusion_witness(lattice(1 << 14), 0.0, 2.0, &p).unwrap();
        assert!((w.coeffs()[9].re - 0.1f64.powf(1.5)).abs() < 1e-15);
        strict_inclusion_witness(lattice(1 << 14), 1.0, 3.0, &p).unwrap();
        let bounded =
            Arc::new(SpectralMeasure::lattice(1 << 14, |n| 2.0 - 1.0 / n as f64).unwrap());
        assert!(matches!(
            strict_inclusion_witness(bounded, 0.0, 2.0, &p),
            Err(Error::OperatorBounded(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let json = r#"{"measure":{"kind":"discrete","atoms":[{"lambda":1.0,"weight":1.0},{"lambda":2.0,"weight":0.5}]},"coeffs":[[1,0],[0,2]],"truncation":2}"#;
        let spec: VectorSpec = serde_json::from_str(json).unwrap();
        let v = spec.build(|_| Err(Error::Input("no refs".into()))).unwrap();
        assert!((scale_norm(&v, s(0.0)).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        let back = VectorSpec::from_vector(&v).unwrap();
        let again = back.build(|_| unreachable!()).unwrap();
        assert_eq!(again.coeffs(), v.coeffs());
    }

    #[test]
    fn f32_norms() {
        let m = Arc::new(SpectralMeasure::<f32>::lattice(10, |k| k as f32).unwrap());
        let f = CoefficientVector::from_fn(m, |l, _| 1.0 / l).unwrap();
        let n = scale_norm(&f, ScaleIndex::new(2.0f32).unwrap()).unwrap();
        assert!((n - 10f32.sqrt()).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn parseval_at_zero(c in proptest::collection::vec(-10.0f64..10.0, 1..200)) {
            let n = c.len();
            let f = CoefficientVector::discrete(lattice(n), real(&c), Tail::Exact).unwrap();
            let direct: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            let v = scale_norm(&f, s(0.0)).unwrap();
            prop_assert!((v - direct).abs() <= 1e-12 * direct.max(1e-300));
        }

        #[test]
        fn monotone_in_index(c in proptest::collection::vec(-10.0f64..10.0, 1..100), r in 0.0f64..3.0, d in 0.0f64..3.0) {
            let f = CoefficientVector::discrete(lattice(c.len()), real(&c), Tail::Exact).unwrap();
            prop_assert!(scale_norm(&f, s(r)).unwrap() <= scale_norm(&f, s(r + d)).unwrap() * (1.0 + 1e-14));
        }

        #[test]
        fn isometry(c in proptest::collection::vec(-10.0f64..10.0, 1..60), ri in 0usize..4, si in 0usize..4, ti in 0usize..4) {
            let grid = [0.0, 0.5, 1.0, 2.0];
            let (r, sv, t) = (grid[ri], grid[si], grid[ti]);
            let f = CoefficientVector::discrete(lattice(c.len()), real(&c), Tail::Exact).unwrap();
            let g = f.map_lambda(|l| l.powf((r - sv) / 2.0));
            let a = scale_norm(&g, s(sv + t)).unwrap();
            let b = scale_norm(&f, s(r + t)).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
        }

        #[test]
        fn restriction_identity(c in proptest::collection::vec(-10.0f64..10.0, 1..60), r in 0.0f64..4.0) {
            let p = DivergencePolicy::default();
            let f = CoefficientVector::discrete(lattice(c.len()), real(&c), Tail::Exact).unwrap();
            let g0 = apply_left_definite_operator(&f, s(0.0), &p).unwrap();
            let gr = apply_left_definite_operator(&f, s(r), &p).unwrap();
            for (a, b) in g0.coeffs().iter().zip(gr.coeffs()) {
                prop_assert!((a - b).norm() <= 1e-14 * a.norm().max(1.0));
            }
        }
    }
}
