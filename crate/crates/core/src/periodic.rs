//! The periodic-type Laplacian `A_φ = −d²/dx²` on `(0, 2π)`.
//!
//! Its domain carries `f(2π) = e^{iφ} f(0)` and `f'(2π) = e^{iφ} f'(0)`. The
//! eigenfunctions are `ψ_n(x) = (2π)^{−1/2} e^{iκ_n x}` with `κ_n = φ/(2π) − n`
//! and eigenvalues `ν_n = κ_n²`. The translation group acts by
//! `(T(t)f)(x) = f(x − t)` for `x ≥ t` and `e^{−iφ} f(x − t + 2π)` for `x < t`,
//! so that `T(t)ψ_n = e^{−iκ_n t} ψ_n`.

use crate::error::{Error, Result};
use crate::function::{CatalogSpec, Smoothness, Support, TestFunction};
use crate::quad::{refine_breaks, with_extra_breaks, GaussLegendre};
use crate::sobolev::{self, classify_levels, Domain, GagliardoConfig, LEVELS};
use crate::spectral::{
    membership, Atom, CoefficientVector, DivergencePolicy, MembershipStatus, MembershipVerdict,
    Prediction, ScaleIndex, SpectralMeasure, Tail,
};
use crate::sum::pairwise;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

pub const TWO_PI: f64 = 2.0 * PI;

/// Default eigen-index window `|n| ≤ N`.
pub const DEFAULT_N: usize = 4096;

/// Relative tolerance for boundary-condition equalities.
pub const BC_TOL: f64 = 1e-8;

/// Offset for one-sided derivatives at jumps.
const JUMP_STEP: f64 = 1e-6;

/// Coefficients below this multiple of `‖f‖` are rounding noise and are zeroed.
const NOISE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodicOperator {
    pub phi: f64,
}

impl PeriodicOperator {
    pub fn new(phi: f64) -> Result<Self> {
        if !(0.0..TWO_PI).contains(&phi) {
            return Err(Error::Input(format!("phi must lie in [0, 2pi), got {phi}")));
        }
        Ok(Self { phi })
    }

    pub fn kappa0(&self) -> f64 {
        self.phi / TWO_PI
    }

    /// `κ_n = φ/(2π) − n`.
    pub fn kappa(&self, n: i64) -> f64 {
        self.kappa0() - n as f64
    }

    pub fn eigenvalue(&self, n: i64) -> f64 {
        self.kappa(n).powi(2)
    }

    pub fn eigenfunction(&self, n: i64) -> TestFunction {
        TestFunction::from_spec(&CatalogSpec::new(
            "fourier-mode",
            &[("n", n as f64), ("phi", self.phi)],
        ))
        .expect("integer mode index")
    }

    /// Simple spectrum unless `φ ∈ {0, π}`.
    pub fn is_simple(&self) -> bool {
        self.phi != 0.0 && self.phi != PI
    }
}

/// `c_n = (ψ_n, f)` for `|n| ≤ N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicCoefficients {
    pub phi: f64,
    pub n_max: usize,
    /// Entry `n + N` holds `c_n`.
    pub c: Vec<Complex64>,
    /// `‖f‖²` on `(0, 2π)`.
    pub l2_sq: f64,
    /// `|Σ|c_n|² − ‖f‖²| / ‖f‖²`.
    pub parseval_defect: f64,
}

impl PeriodicCoefficients {
    pub fn get(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.n_max {
            return Complex64::new(0.0, 0.0);
        }
        self.c[(n + self.n_max as i64) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let off = self.n_max as i64;
        self.c
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - off, c))
    }

    /// Coefficients ordered by `(ν_n, n)` against the discrete spectral measure.
    pub fn spectral_vector(&self) -> Result<CoefficientVector<f64>> {
        let op = PeriodicOperator { phi: self.phi };
        let mut entries: Vec<(f64, i64, Complex64)> =
            self.iter().map(|(n, c)| (op.eigenvalue(n), n, c)).collect();
        entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let atoms = entries
            .iter()
            .map(|e| Atom {
                lambda: e.0,
                weight: 1.0,
            })
            .collect();
        let coeffs = entries.iter().map(|e| e.2).collect();
        CoefficientVector::discrete(
            Arc::new(SpectralMeasure::discrete(atoms)?),
            coeffs,
            Tail::Truncated,
        )
    }
}

fn check_support(f: &TestFunction) -> Result<()> {
    f.require_position_values()?;
    if let Support::Compact(a, b) = f.support() {
        if a < 0.0 || b > TWO_PI {
            return Err(Error::Input(format!(
                "{}: support [{a}, {b}] leaves [0, 2pi]",
                f.name()
            )));
        }
    }
    Ok(())
}

/// One-sided first derivative at `x`, from the side `dir = ±1`.
fn one_sided_derivative(f: &TestFunction, x: f64, dir: f64) -> Result<Complex64> {
    let h = dir * JUMP_STEP;
    Ok(f.derivative(1, x + h)? * 2.0 - f.derivative(1, x + 2.0 * h)?)
}

/// Sawtooth with unit jump at 0 and its mean-zero antiderivative, on `y ∈ [0, 2π)`.
fn q0(y: f64) -> f64 {
    0.5 - y / TWO_PI
}

fn q1(y: f64) -> f64 {
    -(y * y / (2.0 * TWO_PI) - 0.5 * y + PI / 6.0)
}

/// `c_n` for `|n| ≤ N` by FFT of `g = e^{−iκ₀x} f` after removing the jumps of `g` and `g'`.
pub fn analyze(f: &TestFunction, phi: f64, n_max: usize) -> Result<PeriodicCoefficients> {
    let op = PeriodicOperator::new(phi)?;
    check_support(f)?;
    if n_max == 0 {
        return Err(Error::Input("N must be positive".into()));
    }
    let k0 = op.kappa0();
    let rot = |x: f64| Complex64::from_polar(1.0, -k0 * x);
    let wrap = Complex64::from_polar(1.0, -phi);
    let has_derivative = f.max_derivative() >= 1;
    // g' = e^{−iκ₀x}(f' − iκ₀ f)
    let dg = |x: f64, dir: f64| -> Result<Complex64> {
        Ok(rot(x) * (one_sided_derivative(f, x, dir)? - Complex64::new(0.0, k0) * f.eval(x)))
    };

    // (position, jump of g, jump of g')
    let mut jumps: Vec<(f64, Complex64, Complex64)> = Vec::new();
    let j0 = f.eval(0.0) - wrap * f.eval(TWO_PI);
    let j1 = if has_derivative {
        dg(0.0, 1.0)? - dg(TWO_PI, -1.0)?
    } else {
        Complex64::new(0.0, 0.0)
    };
    jumps.push((0.0, j0, j1));
    if has_derivative {
        let mut interior: Vec<f64> = f
            .kinks()
            .iter()
            .copied()
            .filter(|&k| k > 0.0 && k < TWO_PI)
            .collect();
        interior.sort_by(f64::total_cmp);
        interior.dedup();
        for xi in interior {
            jumps.push((xi, Complex64::new(0.0, 0.0), dg(xi, 1.0)? - dg(xi, -1.0)?));
        }
    }

    let m = (8 * (2 * n_max + 1)).max(4096).next_power_of_two();
    let mut buf: Vec<Complex64> = (0..m)
        .map(|j| {
            let x = TWO_PI * j as f64 / m as f64;
            let mut r = rot(x) * f.eval(x);
            for &(xi, a, b) in &jumps {
                let y = (x - xi).rem_euclid(TWO_PI);
                r -= a * q0(y) + b * q1(y);
            }
            r
        })
        .collect();
    FftPlanner::<f64>::new()
        .plan_fft_inverse(m)
        .process(&mut buf);

    let norm = (TWO_PI).sqrt().recip();
    let h = TWO_PI / m as f64;
    let c: Vec<Complex64> = (-(n_max as i64)..=n_max as i64)
        .map(|n| {
            let mut v = buf[n.rem_euclid(m as i64) as usize] * h;
            if n != 0 {
                let nf = n as f64;
                for &(xi, a, b) in &jumps {
                    let phase = Complex64::from_polar(1.0, nf * xi);
                    v += phase * (a * Complex64::new(0.0, 1.0 / nf) - b / (nf * nf));
                }
            }
            v * norm
        })
        .collect();

    let l2_sq = sobolev::l2_norm_on(f, 0.0, TWO_PI).powi(2);
    let c = denoise(c, l2_sq.sqrt());
    let sum_sq = pairwise(&c.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>());
    let parseval_defect = if l2_sq > 0.0 {
        (sum_sq - l2_sq).abs() / l2_sq
    } else {
        sum_sq
    };
    Ok(PeriodicCoefficients {
        phi,
        n_max,
        c,
        l2_sq,
        parseval_defect,
    })
}

fn denoise(mut c: Vec<Complex64>, norm: f64) -> Vec<Complex64> {
    for z in &mut c {
        if z.norm() <= NOISE_FLOOR * norm {
            *z = Complex64::new(0.0, 0.0);
        }
    }
    c
}

/// `f ∈ dom(A_φ^{s/2})`, decided from `Σ ν_n^s |c_n|²`.
pub fn fractional_membership(f: &TestFunction, phi: f64, s: f64) -> Result<MembershipVerdict> {
    fractional_membership_with(f, phi, s, DEFAULT_N)
}

pub fn fractional_membership_with(
    f: &TestFunction,
    phi: f64,
    s: f64,
    n_max: usize,
) -> Result<MembershipVerdict> {
    let s = ScaleIndex::new(s)?;
    let c = analyze(f, phi, n_max)?;
    Ok(coefficient_membership(&c, s))
}

fn coefficient_membership(c: &PeriodicCoefficients, s: ScaleIndex<f64>) -> MembershipVerdict {
    match c.spectral_vector() {
        Ok(v) => membership(&v, s, &DivergencePolicy::default()),
        Err(e) => MembershipVerdict::indeterminate(e.to_string(), Vec::new()),
    }
}

/// `f^{(k)}(2π) = e^{iφ} f^{(k)}(0)` within [`BC_TOL`].
pub fn boundary_condition_holds(f: &TestFunction, phi: f64, k: usize) -> Result<bool> {
    let a = f.derivative(k, 0.0)?;
    let b = f.derivative(k, TWO_PI)?;
    let scale = a.norm().max(b.norm()).max(1.0);
    Ok((b - Complex64::from_polar(1.0, phi) * a).norm() <= BC_TOL * scale)
}

/// Smoothness on the closed interval, counting endpoint singularities.
fn smoothness_on(f: &TestFunction) -> Smoothness {
    if f.kinks().iter().any(|&k| (0.0..=TWO_PI).contains(&k)) {
        f.smoothness()
    } else {
        Smoothness::Infinite
    }
}

/// `f ∈ H^s((0, 2π))`.
fn hs_finite(f: &TestFunction, s: f64) -> Result<bool> {
    let m = s.floor() as u32;
    let smooth = smoothness_on(f);
    if smooth.at_least(m + 1) {
        return Ok(true);
    }
    if !smooth.at_least(m) {
        return Ok(false);
    }
    let parts = sobolev::hs_interval_parts(f, 0.0, TWO_PI, s)?;
    match parts.gagliardo.as_ref().map(|g| g.verdict.status) {
        None | Some(MembershipStatus::Member) => {
            Ok(parts.l2_sq.is_finite() && parts.derivative_sq.is_finite())
        }
        Some(MembershipStatus::NonMember) => Ok(false),
        Some(MembershipStatus::Indeterminate) => Err(Error::Capability(format!(
            "{}: H^{s} seminorm inconclusive on (0, 2pi)",
            f.name()
        ))),
    }
}

/// Membership in `dom(A_φ^{s/2})` predicted from `H^s` regularity and boundary conditions.
///
/// With `s = m + θ`, conditions on `f^{(k)}` are required for `k < m` when
/// `θ < 1/2` and for `k ≤ m` when `θ > 1/2`. At `θ = 1/2` the `k = m` condition
/// is replaced by finiteness of the wrap-around integral of `f^{(m)}`.
pub fn characterize(f: &TestFunction, phi: f64, s: f64) -> Result<Prediction> {
    PeriodicOperator::new(phi)?;
    check_support(f)?;
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Input(format!("s must be > 0, got {s}")));
    }
    let m = s.floor() as usize;
    let theta = s - m as f64;
    let half = (theta - 0.5).abs() < 1e-12;
    let top = if theta > 0.5 && !half { m + 1 } else { m };
    if top.max(m) > f.max_derivative() {
        return Err(Error::Capability(format!(
            "{}: boundary conditions need derivatives through order {}",
            f.name(),
            top.max(m)
        )));
    }
    if !hs_finite(f, s)? {
        return Ok(Prediction::PredictedNonMember);
    }
    for k in 0..top {
        if !boundary_condition_holds(f, phi, k)? {
            return Ok(Prediction::PredictedNonMember);
        }
    }
    if half {
        // A boundary mismatch of f^{(m)} makes the wrap-around integrand ≈ |jump|² t.
        if !boundary_condition_holds(f, phi, m)? {
            return Ok(Prediction::PredictedNonMember);
        }
        let d = f.derivative_function(m)?;
        let b = wrap_levels(&d, phi, 0.5);
        return match b.verdict.status {
            MembershipStatus::Member => Ok(Prediction::PredictedMember),
            MembershipStatus::NonMember => Ok(Prediction::PredictedNonMember),
            MembershipStatus::Indeterminate => Err(Error::Capability(format!(
                "{}: wrap-around integral inconclusive at s = {s}",
                f.name()
            ))),
        };
    }
    Ok(Prediction::PredictedMember)
}

/// [`characterize`] for `s ∈ (0, 1)`.
pub fn boundary_characterization(f: &TestFunction, phi: f64, s: f64) -> Result<Prediction> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Input(format!("s must lie in (0, 1), got {s}")));
    }
    characterize(f, phi, s)
}

/// [`characterize`] for `s ≥ 1`.
pub fn higher_order_membership(f: &TestFunction, phi: f64, s: f64) -> Result<Prediction> {
    if !(s >= 1.0) {
        return Err(Error::Input(format!("s must be >= 1, got {s}")));
    }
    characterize(f, phi, s)
}

/// `(T(t)f)(x)`.
pub fn translate(f: &TestFunction, phi: f64, t: f64, x: f64) -> Complex64 {
    if x >= t {
        f.eval(x - t)
    } else {
        Complex64::from_polar(1.0, -phi) * f.eval(x - t + TWO_PI)
    }
}

fn shifted_kinks(f: &TestFunction, shifts: &[f64]) -> Vec<f64> {
    let mut out = vec![];
    for &k in f.kinks() {
        for &d in shifts {
            out.push(k + d);
        }
    }
    out
}

/// `‖T(t)f‖²` on `(0, 2π)`.
pub fn translated_norm_sq(f: &TestFunction, phi: f64, t: f64) -> f64 {
    let gl = GaussLegendre::<f64>::new(16);
    let mut extra = shifted_kinks(f, &[t, t - TWO_PI]);
    extra.push(t);
    let breaks = refine_breaks(&with_extra_breaks(0.0, TWO_PI, &extra), f.feature_scale());
    let panels: Vec<f64> = gl.panel_values(&breaks, |x| translate(f, phi, t, x).norm_sqr());
    pairwise(&panels)
}

/// `A_φ f = −f''`, defined when `f` has two derivatives.
pub fn apply_operator(f: &TestFunction) -> Result<TestFunction> {
    Ok(f.derivative_function(2)?.scaled(Complex64::new(-1.0, 0.0)))
}

/// Dyadic `t`-levels `[2^{−k−1}, 2^{−k}]·2π` of a `t^{−1−2s}`-weighted integral.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelIntegral {
    /// `(upper t of the level, contribution)`, outermost first.
    pub levels: Vec<(f64, f64)>,
    pub total: f64,
    pub verdict: MembershipVerdict,
}

impl LevelIntegral {
    fn from_levels(levels: Vec<(f64, f64)>) -> Self {
        let values: Vec<f64> = levels.iter().map(|l| l.1).collect();
        if values.iter().all(|v| v.is_finite()) {
            return Self {
                total: pairwise(&values),
                verdict: classify_levels(&values),
                levels,
            };
        }
        let finite: Vec<f64> = values
            .iter()
            .map(|&v| if v.is_finite() { v } else { 0.0 })
            .collect();
        let mut verdict = classify_levels(&finite);
        if !verdict.is_non_member() {
            verdict = MembershipVerdict::non_member(0.0, verdict.partial_sums)
                .with_diagnostic("integrand vanishes no faster than t^{2s} at 0");
        }
        Self {
            total: f64::INFINITY,
            verdict,
            levels,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.verdict.status != MembershipStatus::NonMember
    }
}

fn level_integral<D: Fn(f64) -> f64>(s: f64, inner: D) -> LevelIntegral {
    let gl = GaussLegendre::<f64>::new(16);
    let mut levels: Vec<(f64, f64)> = (0..LEVELS)
        .map(|k| {
            let hi = TWO_PI * 0.5f64.powi(k as i32);
            let v: f64 = gl
                .mapped(0.5 * hi, hi)
                .map(|(t, w)| w * t.powf(-1.0 - 2.0 * s) * inner(t))
                .sum();
            (hi, v)
        })
        .collect();
    // Below the last level the integrand is extrapolated as a power of t.
    let hi = TWO_PI * 0.5f64.powi(LEVELS as i32);
    let (d1, d0) = (inner(hi), inner(0.5 * hi));
    let p = if d1 > 0.0 && d0 > 0.0 {
        (d1 / d0).log2()
    } else {
        f64::INFINITY
    };
    let rest = if d1 <= 0.0 {
        0.0
    } else if p > 2.0 * s {
        d1 * hi.powf(-2.0 * s) / (p - 2.0 * s)
    } else {
        f64::INFINITY
    };
    levels.push((hi, rest));
    LevelIntegral::from_levels(levels)
}

/// `∫₀^t |e^{−iφ} f(x + 2π − t) − f(x)|² dx`.
fn wrap_energy(f: &TestFunction, phi: f64, t: f64, gl: &GaussLegendre<f64>) -> f64 {
    let wrap = Complex64::from_polar(1.0, -phi);
    let breaks = sobolev::panel_breaks(
        0.0,
        t,
        f.feature_scale(),
        &shifted_kinks(f, &[0.0, t - TWO_PI]),
    );
    let panels: Vec<f64> = gl.panel_values(&breaks, |x| {
        (wrap * f.eval(x + TWO_PI - t) - f.eval(x)).norm_sqr()
    });
    pairwise(&panels)
}

/// `∫_t^{2π} |f(x − t) − f(x)|² dx`.
fn interior_energy(f: &TestFunction, t: f64, gl: &GaussLegendre<f64>) -> f64 {
    let breaks = sobolev::panel_breaks(t, TWO_PI, f.feature_scale(), &shifted_kinks(f, &[0.0, t]));
    let panels: Vec<f64> = gl.panel_values(&breaks, |x| (f.eval(x - t) - f.eval(x)).norm_sqr());
    pairwise(&panels)
}

fn wrap_levels(f: &TestFunction, phi: f64, s: f64) -> LevelIntegral {
    let gl = GaussLegendre::<f64>::new(16);
    level_integral(s, |t| wrap_energy(f, phi, t, &gl))
}

/// Interior part `(A)`, half the interval Gagliardo integral, and wrap-around part `(B)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitSeminorm {
    pub a: f64,
    pub a_verdict: MembershipVerdict,
    pub b: LevelIntegral,
}

impl SplitSeminorm {
    /// `(A) + (B)`, `None` when either part diverges.
    pub fn total(&self) -> Option<f64> {
        (self.a_verdict.status != MembershipStatus::NonMember && self.b.is_finite())
            .then_some(self.a + self.b.total)
    }
}

pub fn split_seminorm_ab(f: &TestFunction, phi: f64, s: f64) -> Result<SplitSeminorm> {
    PeriodicOperator::new(phi)?;
    check_support(f)?;
    let g = sobolev::gagliardo(f, Domain::Interval(0.0, TWO_PI), &GagliardoConfig::new(s)?)?;
    Ok(SplitSeminorm {
        a: 0.5 * g.squared,
        a_verdict: g.verdict,
        b: wrap_levels(f, phi, s),
    })
}

/// `∫₀^{2π} t^{−1−2s} ‖T(t)f − f‖² dt` by direct quadrature.
pub fn group_difference_integral(f: &TestFunction, phi: f64, s: f64) -> Result<LevelIntegral> {
    PeriodicOperator::new(phi)?;
    check_support(f)?;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Input(format!("s must lie in (0, 1), got {s}")));
    }
    let gl = GaussLegendre::<f64>::new(16);
    Ok(level_integral(s, |t| {
        wrap_energy(f, phi, t, &gl) + interior_energy(f, t, &gl)
    }))
}

/// `∫₀^{2π} t^{−1−2s} 4 sin²(κt/2) dt`.
pub fn translation_weight(kappa: f64, s: f64) -> f64 {
    let k = kappa.abs();
    if k == 0.0 {
        return 0.0;
    }
    // u = |κ| t turns the weight into 2|κ|^{2s} ∫₀^X (1 − cos u) u^{−1−2s} du.
    let x = TWO_PI * k;
    let a = 1.0 + 2.0 * s;
    let inner = if x <= 64.0 {
        let gl = GaussLegendre::<f64>::new(16);
        let mut breaks = crate::quad::geometric_breaks_toward_start(0.0, x.min(1.0), 40);
        let eps = breaks[1];
        breaks.remove(0);
        if x > 1.0 {
            breaks.extend(refine_breaks(&[1.0, x], 0.5).into_iter().skip(1));
        }
        let panels: Vec<f64> = gl.panel_values(&breaks, |u| {
            // 1 − cos u = 2 sin²(u/2) avoids cancellation near 0.
            2.0 * (0.5 * u).sin().powi(2) * u.powf(-a)
        });
        // (1 − cos u) ≈ u²/2 on [0, ε]
        pairwise(&panels) + eps.powf(2.0 - 2.0 * s) / (4.0 - 4.0 * s)
    } else {
        // ∫₀^∞ (1 − cos u) u^{−a} du = π / (2 Γ(1 + 2s) sin(πs))
        let full = PI / (2.0 * crate::special::gamma(1.0 + 2.0 * s) * (PI * s).sin());
        let cos_tail = -x.sin() * x.powf(-a)
            + a * x.cos() * x.powf(-a - 1.0)
            + a * (a + 1.0) * x.sin() * x.powf(-a - 2.0);
        full - (x.powf(-2.0 * s) / (2.0 * s) - cos_tail)
    };
    2.0 * k.powf(2.0 * s) * inner
}

/// `Σ |c_n|² ∫₀^{2π} t^{−1−2s} 4 sin²(κ_n t/2) dt`, the group integral on the coefficient side.
pub fn spectral_group_integral(c: &PeriodicCoefficients, s: f64) -> f64 {
    let op = PeriodicOperator { phi: c.phi };
    let terms: Vec<f64> = c
        .iter()
        .map(|(n, z)| z.norm_sqr() * translation_weight(op.kappa(n), s))
        .collect();
    pairwise(&terms)
}

/// Sine and cosine coefficients on `(0, 2π)` with eigenvalues `m²/4`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfWaveCoefficients {
    /// `(f, π^{−1/2} sin(mx/2))` for `m = 1..=M`.
    pub dirichlet: Vec<f64>,
    /// `(f, (2π)^{−1/2})` then `(f, π^{−1/2} cos(mx/2))` for `m = 1..=M`.
    pub neumann: Vec<Complex64>,
    dirichlet_c: Vec<Complex64>,
}

/// Sine and cosine coefficients from the `φ = 0` and `φ = π` analyses.
pub fn half_wave_coefficients(f: &TestFunction, n_max: usize) -> Result<HalfWaveCoefficients> {
    let even = analyze(f, 0.0, n_max)?;
    let odd = analyze(f, PI, n_max)?;
    let root = TWO_PI.sqrt();
    // I(m) = ∫ f e^{imx/2}
    let integral = |m: i64| -> Complex64 {
        if m % 2 == 0 {
            even.get(m / 2) * root
        } else {
            odd.get((m + 1).div_euclid(2)) * root
        }
    };
    let top = 2 * n_max as i64;
    let rpi = PI.sqrt().recip();
    let norm = even.l2_sq.sqrt();
    let dirichlet_c = denoise(
        (1..=top)
            .map(|m| (integral(m) - integral(-m)) / Complex64::new(0.0, 2.0) * rpi)
            .collect(),
        norm,
    );
    let mut neumann = vec![integral(0) / root];
    neumann.extend((1..=top).map(|m| (integral(m) + integral(-m)) * 0.5 * rpi));
    let neumann = denoise(neumann, norm);
    Ok(HalfWaveCoefficients {
        dirichlet: dirichlet_c.iter().map(|z| z.norm()).collect(),
        neumann,
        dirichlet_c,
    })
}

fn half_wave_membership(coeffs: &[Complex64], first: i64, s: f64) -> MembershipVerdict {
    let atoms = (0..coeffs.len())
        .map(|i| Atom {
            lambda: ((first + i as i64) as f64).powi(2) / 4.0,
            weight: 1.0,
        })
        .collect();
    let v = SpectralMeasure::discrete(atoms)
        .and_then(|m| CoefficientVector::discrete(Arc::new(m), coeffs.to_vec(), Tail::Truncated))
        .and_then(|v| {
            Ok(membership(
                &v,
                ScaleIndex::new(s)?,
                &DivergencePolicy::default(),
            ))
        });
    v.unwrap_or_else(|e| MembershipVerdict::indeterminate(e.to_string(), Vec::new()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Relation {
    pub name: String,
    /// `None` when a verdict involved is indeterminate.
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub s: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub periodic1: MembershipVerdict,
    pub periodic2: MembershipVerdict,
    pub dirichlet: MembershipVerdict,
    pub neumann: MembershipVerdict,
    pub relations: Vec<Relation>,
}

impl ThresholdReport {
    /// No determinate relation fails.
    pub fn consistent(&self) -> bool {
        self.relations.iter().all(|r| r.holds != Some(false))
    }
}

fn relation(
    name: &str,
    verdicts: &[&MembershipVerdict],
    rule: impl Fn(&[bool]) -> bool,
) -> Relation {
    let holds = verdicts
        .iter()
        .all(|v| v.is_determinate())
        .then(|| rule(&verdicts.iter().map(|v| v.is_member()).collect::<Vec<_>>()));
    Relation {
        name: name.into(),
        holds,
    }
}

/// Compares membership under `A_{φ₁}`, `A_{φ₂}` and the Dirichlet and Neumann Laplacians.
pub fn threshold_comparison(
    s: f64,
    phi1: f64,
    phi2: f64,
    f: &TestFunction,
) -> Result<ThresholdReport> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Input(format!("s must lie in (0, 1), got {s}")));
    }
    let p1 = fractional_membership(f, phi1, s)?;
    let p2 = fractional_membership(f, phi2, s)?;
    let hw = half_wave_coefficients(f, DEFAULT_N)?;
    let dirichlet = half_wave_membership(&hw.dirichlet_c, 1, s);
    let neumann = half_wave_membership(&hw.neumann, 0, s);
    let mut relations = vec![
        relation("dirichlet_within_neumann", &[&dirichlet, &neumann], |m| {
            !m[0] || m[1]
        }),
        relation(
            "dirichlet_within_both_periodic",
            &[&dirichlet, &p1, &p2],
            |m| !m[0] || (m[1] && m[2]),
        ),
    ];
    if s < 0.5 {
        relations.push(relation(
            "all_four_equal",
            &[&p1, &p2, &dirichlet, &neumann],
            |m| m.iter().all(|&x| x == m[0]),
        ));
    } else if phi1 != phi2 {
        relations.push(relation(
            "intersection_equals_dirichlet",
            &[&p1, &p2, &dirichlet],
            |m| (m[0] && m[1]) == m[2],
        ));
    }
    Ok(ThresholdReport {
        s,
        phi1,
        phi2,
        periodic1: p1,
        periodic2: p2,
        dirichlet,
        neumann,
        relations,
    })
}
