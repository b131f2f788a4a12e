//! Half-line Laplacians `B_α` and Bessel operators `T_γ` through their eigenfunction transforms.
//!
//! Every transform is evaluated in the momentum variable `k = √λ`, so
//! `∫ G(λ) dρ(λ) = ∫ G(k²) ρ'(k²) 2k dk` and the `λ^{−1/2}` density singularity
//! of the Neumann case disappears.

use crate::error::{Error, Result};
use crate::function::{Support, TestFunction};
use crate::quad::{refine_breaks, with_extra_breaks, GaussLegendre};
use crate::sobolev::{hs_interval_parts, integration_window};
use crate::special::{jnu, BESSEL_MAX_ORDER};
use crate::spectral::{
    DivergencePolicy, Family, MembershipVerdict, Prediction, QuadratureHint, SpectralMeasure,
};
use crate::sum::{cumulative, pairwise};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::sync::Arc;

/// Largest momentum of the refinement windows `[2^{j−1}, 2^j]`.
pub const K_WINDOWS: u32 = 8;
const NODES: usize = 6;
const ALPHA_SLACK: f64 = 1e-12;

/// Boundary behaviour at `x = 0` that governs the fractional domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Dirichlet,
    Neumann,
    Robin,
    Bessel,
}

impl Boundary {
    fn vanishes_at_origin(self) -> bool {
        matches!(self, Boundary::Dirichlet | Boundary::Bessel)
    }
}

/// An operator on `(0, ∞)` diagonalized by `F f(λ) = ∫ φ(λ, x) f(x) dx`.
pub trait EigenTransform: Sync {
    /// `φ(k², x)`.
    fn kernel(&self, k: f64, x: f64) -> f64;
    /// `dρ/dλ`.
    fn density(&self, lambda: f64) -> f64;
    /// `ρ(λ)`.
    fn rho(&self, lambda: f64) -> f64;
    /// `2k ρ'(k²)`.
    fn k_density(&self, k: f64) -> f64;
    fn boundary(&self) -> Boundary;
    fn label(&self) -> String;
    fn family(&self) -> Family;

    fn spectral_measure(&self, hi: f64) -> Result<SpectralMeasure<f64>>
    where
        Self: Clone + Send + 'static,
    {
        let op = self.clone();
        SpectralMeasure::continuous_family(
            Arc::new(move |l| op.density(l)),
            0.0,
            hi,
            QuadratureHint {
                panels: 64,
                oscillation_scale: 1.0,
            },
            self.family(),
        )
    }
}

/// `φ_α(λ, x) = −sin α cos(√λ x) + cos α sin(√λ x)/√λ`, continuous at `λ = 0`.
pub fn phi_alpha(alpha: f64, lambda: f64, x: f64) -> f64 {
    phi_k(alpha.sin(), alpha.cos(), lambda.max(0.0).sqrt(), x)
}

fn phi_k(sin_a: f64, cos_a: f64, k: f64, x: f64) -> f64 {
    let z = k * x;
    let sinc = if z.abs() < 1e-4 {
        x * (1.0 - z * z / 6.0)
    } else {
        z.sin() / k
    };
    -sin_a * z.cos() + cos_a * sinc
}

/// `B_α = −d²/dx²` on `(0, ∞)` with `sin α f′(0) + cos α f(0) = 0`, `α ∈ [π/2, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalflineOperator {
    alpha: f64,
    sin_a: f64,
    cos_a: f64,
}

impl HalflineOperator {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha >= FRAC_PI_2 - ALPHA_SLACK && alpha <= PI + ALPHA_SLACK) {
            return Err(Error::Input(format!(
                "alpha must lie in [pi/2, pi] so that B_alpha >= 0, got {alpha}"
            )));
        }
        let alpha = alpha.clamp(FRAC_PI_2, PI);
        let (sin_a, cos_a) = if alpha == PI {
            (0.0, -1.0)
        } else if alpha == FRAC_PI_2 {
            (1.0, 0.0)
        } else {
            alpha.sin_cos()
        };
        Ok(Self {
            alpha,
            sin_a,
            cos_a,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl EigenTransform for HalflineOperator {
    fn kernel(&self, k: f64, x: f64) -> f64 {
        phi_k(self.sin_a, self.cos_a, k, x)
    }

    fn density(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        lambda.sqrt() / (PI * (self.cos_a * self.cos_a + lambda * self.sin_a * self.sin_a))
    }

    fn rho(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        let r = lambda.sqrt();
        match self.boundary() {
            Boundary::Neumann => 2.0 * r / PI,
            Boundary::Dirichlet => 2.0 * r * lambda / (3.0 * PI),
            _ => {
                let cot = self.cos_a / self.sin_a;
                2.0 / (PI * self.sin_a * self.sin_a) * (r - cot * (r / cot).atan())
            }
        }
    }

    fn k_density(&self, k: f64) -> f64 {
        2.0 * k * k / (PI * (self.cos_a * self.cos_a + k * k * self.sin_a * self.sin_a))
    }

    fn boundary(&self) -> Boundary {
        if self.sin_a == 0.0 {
            Boundary::Dirichlet
        } else if self.cos_a == 0.0 {
            Boundary::Neumann
        } else {
            Boundary::Robin
        }
    }

    fn label(&self) -> String {
        format!("halfline(alpha={})", self.alpha)
    }

    fn family(&self) -> Family {
        Family::Halfline { alpha: self.alpha }
    }
}

/// `T_γ = −d²/dx² + (γ² − 1/4)/x²` on `(0, ∞)`, `0 < γ ≤ 10`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOperator {
    gamma: f64,
}

impl BesselOperator {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= BESSEL_MAX_ORDER) {
            return Err(Error::Input(format!(
                "gamma must lie in (0, {BESSEL_MAX_ORDER}], got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl EigenTransform for BesselOperator {
    /// `(π/2)^{1/2} k^{−γ} x^{1/2} J_γ(kx)`.
    fn kernel(&self, k: f64, x: f64) -> f64 {
        let z = k * x;
        let g = self.gamma;
        if z < 1e-3 {
            // Leading term of the ascending series, stable as k → 0.
            let lead = (0.5 * x).powf(g) / crate::special::gamma(g + 1.0);
            return FRAC_PI_2.sqrt() * x.sqrt() * lead * (1.0 - z * z / (4.0 * (g + 1.0)));
        }
        FRAC_PI_2.sqrt() * k.powf(-g) * x.sqrt() * jnu(g, z)
    }

    fn density(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        lambda.powf(self.gamma) / PI
    }

    fn rho(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        lambda.powf(self.gamma + 1.0) / (PI * (self.gamma + 1.0))
    }

    fn k_density(&self, k: f64) -> f64 {
        2.0 * k.powf(2.0 * self.gamma + 1.0) / PI
    }

    fn boundary(&self) -> Boundary {
        Boundary::Bessel
    }

    fn label(&self) -> String {
        format!("bessel(gamma={})", self.gamma)
    }

    fn family(&self) -> Family {
        Family::Bessel { gamma: self.gamma }
    }
}

/// Convenience for callers that choose the operator at run time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HalflineFamily {
    Halfline(HalflineOperator),
    Bessel(BesselOperator),
}

impl HalflineFamily {
    pub fn as_transform(&self) -> &dyn EigenTransform {
        match self {
            HalflineFamily::Halfline(op) => op,
            HalflineFamily::Bessel(op) => op,
        }
    }

    pub fn spectral_measure(&self, hi: f64) -> Result<SpectralMeasure<f64>> {
        match self {
            HalflineFamily::Halfline(op) => op.spectral_measure(hi),
            HalflineFamily::Bessel(op) => op.spectral_measure(hi),
        }
    }
}

/// `F f` sampled on a λ-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSamples {
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub density: Vec<f64>,
}

impl SpectralSamples {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,re,im,density\n");
        for ((l, v), d) in self.grid.iter().zip(&self.values).zip(&self.density) {
            let _ = writeln!(out, "{l},{},{},{d}", v.re, v.im);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some("lambda,re,im,density") {
            return Err(Error::Input("expected header lambda,re,im,density".into()));
        }
        let mut s = SpectralSamples {
            grid: Vec::new(),
            values: Vec::new(),
            density: Vec::new(),
        };
        for (i, line) in lines.enumerate() {
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Input(format!("row {}: {e}", i + 1)))?;
            if cols.len() != 4 {
                return Err(Error::Input(format!(
                    "row {} has {} columns",
                    i + 1,
                    cols.len()
                )));
            }
            s.grid.push(cols[0]);
            s.values.push(Complex64::new(cols[1], cols[2]));
            s.density.push(cols[3]);
        }
        Ok(s)
    }
}

/// Geometric grid from `1e−4` to `lambda_max` with 40 points per decade.
pub fn default_grid(lambda_max: f64) -> Vec<f64> {
    let lo: f64 = 1e-4;
    let decades = (lambda_max / lo).log10().max(0.0);
    let n = (40.0 * decades).ceil() as usize;
    (0..=n)
        .map(|i| lo * 10f64.powf(decades * i as f64 / n.max(1) as f64))
        .collect()
}

/// Position-space nodes carrying `w_i f(x_i)`, resolved for momenta up to `k_max`.
struct Nodes {
    x: Vec<f64>,
    wf: Vec<Complex64>,
}

fn restricted_window(f: &TestFunction) -> Result<(f64, f64)> {
    f.require_position_values()?;
    let (lo, hi) = match f.support() {
        Support::Compact(a, b) => (a, b),
        _ => integration_window(f)?,
    };
    if hi <= 0.0 {
        return Err(Error::Input(format!("{} vanishes on (0, inf)", f.name())));
    }
    Ok((lo.max(0.0), hi))
}

fn nodes(f: &TestFunction, k_max: f64) -> Result<Nodes> {
    nodes_of_order(f, k_max, NODES)
}

fn nodes_of_order(f: &TestFunction, k_max: f64, order: usize) -> Result<Nodes> {
    let (a, b) = restricted_window(f)?;
    let quarter = FRAC_PI_2 / k_max.max(1e-3);
    let width = quarter.min(f.feature_scale());
    let breaks = refine_breaks(&with_extra_breaks(a, b, f.kinks()), width);
    let gl = GaussLegendre::<f64>::new(order);
    let mut out = Nodes {
        x: Vec::new(),
        wf: Vec::new(),
    };
    for w in breaks.windows(2) {
        for (x, wt) in gl.mapped(w[0], w[1]) {
            out.x.push(x);
            out.wf.push(f.eval(x) * wt);
        }
    }
    Ok(out)
}

fn apply(op: &dyn EigenTransform, n: &Nodes, k: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&x, &w) in n.x.iter().zip(&n.wf) {
        acc += w * op.kernel(k, x);
    }
    acc
}

/// `F f(λ)` at a single λ, on a finer rule than the tabulated transforms.
pub fn transform_at(op: &dyn EigenTransform, f: &TestFunction, lambda: f64) -> Result<Complex64> {
    let k = lambda.max(0.0).sqrt();
    Ok(apply(op, &nodes_of_order(f, k.max(1.0), 16)?, k))
}

/// Samples of `F f` on `grid` (increasing λ > 0).
pub fn transform(
    op: &dyn EigenTransform,
    f: &TestFunction,
    grid: &[f64],
) -> Result<SpectralSamples> {
    if grid.iter().any(|&l| !(l > 0.0) || !l.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Input(
            "λ-grid must be positive and increasing".into(),
        ));
    }
    let k_max = grid.last().map_or(1.0, |l| l.sqrt());
    let n = nodes(f, k_max)?;
    let values = grid.par_iter().map(|&l| apply(op, &n, l.sqrt())).collect();
    Ok(SpectralSamples {
        grid: grid.to_vec(),
        values,
        density: grid.iter().map(|&l| op.density(l)).collect(),
    })
}

/// `|F f|² · 2k ρ'(k²)` tabulated on Gauss nodes of the momentum windows
/// `[0, 1], [1, 2], …, [2^{K−1}, 2^K]`.
#[derive(Debug, Clone)]
pub struct TransformProfile {
    /// `(k, quadrature weight × |F f(k²)|² × 2k ρ'(k²))` per window.
    windows: Vec<Vec<(f64, f64)>>,
    pub l2_sq: f64,
    pub truncated_at: Option<f64>,
}

pub fn profile(op: &dyn EigenTransform, f: &TestFunction) -> Result<TransformProfile> {
    let (_, b) = restricted_window(f)?;
    let truncated_at = match f.support() {
        Support::Compact(..) => None,
        _ => Some(b),
    };
    let gl = GaussLegendre::<f64>::new(NODES);
    let k_width = FRAC_PI_2 / b;
    let mut windows = Vec::new();
    for j in 0..=K_WINDOWS {
        let (lo, hi) = if j == 0 {
            (0.0, 1.0)
        } else {
            (2f64.powi(j as i32 - 1), 2f64.powi(j as i32))
        };
        let n = nodes(f, hi)?;
        let breaks = refine_breaks(&[lo, hi], k_width);
        let ks: Vec<(f64, f64)> = breaks
            .windows(2)
            .flat_map(|w| gl.mapped(w[0], w[1]).collect::<Vec<_>>())
            .collect();
        let vals: Vec<(f64, f64)> = ks
            .par_iter()
            .map(|&(k, w)| (k, w * apply(op, &n, k).norm_sqr() * op.k_density(k)))
            .collect();
        windows.push(vals);
    }
    let (a, _) = restricted_window(f)?;
    let l2_sq = crate::sobolev::l2_norm_on(f, a, b).powi(2);
    Ok(TransformProfile {
        windows,
        l2_sq,
        truncated_at,
    })
}

impl TransformProfile {
    /// Cumulative `∫_0^K (1+k²)^s |F f|² dρ` at `K = 1, 2, 4, …`.
    pub fn partial_integrals(&self, s: f64) -> Vec<(f64, f64)> {
        let blocks: Vec<f64> = self
            .windows
            .iter()
            .map(|w| {
                let t: Vec<f64> = w.iter().map(|&(k, v)| (1.0 + k * k).powf(s) * v).collect();
                pairwise(&t)
            })
            .collect();
        cumulative(&blocks)
            .into_iter()
            .enumerate()
            .map(|(j, v)| (2f64.powi(j as i32), v))
            .collect()
    }

    pub fn membership(&self, s: f64) -> MembershipVerdict {
        let partial = self.partial_integrals(s);
        let mut v = DivergencePolicy::default().classify(partial);
        if let Some(x) = self.truncated_at {
            v = v.with_diagnostic(format!("position integral truncated at x = {x}"));
        }
        v
    }
}

/// `(∫ (1+λ)^s |F f|² dρ)^{1/2}` with a windowed divergence verdict.
pub fn fractional_norm(
    op: &dyn EigenTransform,
    f: &TestFunction,
    s: f64,
) -> Result<MembershipVerdict> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::Input(format!("s must be >= 0, got {s}")));
    }
    Ok(profile(op, f)?.membership(s))
}

/// `∫_0^X |f|²/x`, split into dyadic levels toward the origin.
pub fn hardy_integral(f: &TestFunction) -> Result<MembershipVerdict> {
    let (_, b) = restricted_window(f)?;
    let gl = GaussLegendre::<f64>::new(16);
    let levels: Vec<f64> = (0..crate::sobolev::LEVELS)
        .map(|k| {
            let hi = b * 0.5f64.powi(k as i32);
            let br = refine_breaks(
                &with_extra_breaks(0.5 * hi, hi, f.kinks()),
                f.feature_scale(),
            );
            gl.integrate_panels(&br, |x| f.eval(x).norm_sqr() / x)
        })
        .collect();
    Ok(crate::sobolev::classify_levels(&levels))
}

/// Membership of `f` in `dom((I + op)^{s/2})` predicted from the Sobolev-space identities on `(0, ∞)`.
pub fn sobolev_domain_predicate(
    op: &dyn EigenTransform,
    f: &TestFunction,
    s: f64,
) -> Result<Prediction> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Input(format!("s must lie in (0, 1], got {s}")));
    }
    let (a, b) = restricted_window(f)?;
    if a > 0.0 {
        // Support away from the origin: every boundary condition is vacuous.
        let hs = hs_interval_parts(f, a.min(b), b, s)?;
        return Ok(Prediction::from_bool(hs.is_finite()));
    }
    let hs = hs_interval_parts(f, 0.0, b, s)?;
    if !hs.is_finite() {
        return Ok(Prediction::PredictedNonMember);
    }
    if !op.boundary().vanishes_at_origin() || s < 0.5 {
        return Ok(Prediction::PredictedMember);
    }
    let f0 = f.eval(0.0).norm();
    let tol = 1e-10 * f.eval(0.5 * f.feature_scale()).norm().max(1.0);
    if f0 > tol {
        return Ok(Prediction::PredictedNonMember);
    }
    if (s - 0.5).abs() < 1e-12 {
        return Ok(Prediction::from_bool(!hardy_integral(f)?.is_non_member()));
    }
    Ok(Prediction::PredictedMember)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::catalog;

    #[test]
    fn phi_examples() {
        let (l, x) = (2.3f64, 0.7);
        let k = l.sqrt();
        assert!((phi_alpha(PI, l, x) + (k * x).sin() / k).abs() < 1e-15);
        assert!((phi_alpha(FRAC_PI_2, l, x) + (k * x).cos()).abs() < 1e-15);
        assert!((phi_alpha(PI, 0.0, x) + x).abs() < 1e-15);
        assert!((phi_alpha(PI, 1e-14, x) + x).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(HalflineOperator::new(1.0).is_err());
        assert!(HalflineOperator::new(3.5).is_err());
        assert!(BesselOperator::new(0.0).is_err());
        assert!(BesselOperator::new(11.0).is_err());
    }

    #[test]
    fn densities_match_differentiated_rho() {
        for i in 0..5 {
            let op = HalflineOperator::new(FRAC_PI_2 + FRAC_PI_2 * i as f64 / 4.0).unwrap();
            for &l in &[0.1, 1.0, 7.0, 100.0] {
                let h = 1e-4 * l;
                let d = (op.rho(l + h) - op.rho(l - h)) / (2.0 * h);
                assert!(
                    (d - op.density(l)).abs() < 1e-8 * op.density(l).max(1.0),
                    "alpha {}, l {l}",
                    op.alpha()
                );
            }
        }
        let b = BesselOperator::new(1.5).unwrap();
        assert!((b.density(2.0) - 2f64.powf(1.5) / PI).abs() < 1e-15);
    }

    #[test]
    fn parseval_for_bumps() {
        let f = catalog("bump(1,3)");
        let want = crate::sobolev::l2_norm_on(&f, 1.0, 3.0).powi(2);
        for op in [
            HalflineFamily::Halfline(HalflineOperator::new(PI).unwrap()),
            HalflineFamily::Halfline(HalflineOperator::new(0.75 * PI).unwrap()),
            HalflineFamily::Bessel(BesselOperator::new(2.0).unwrap()),
        ] {
            let v = fractional_norm(op.as_transform(), &f, 0.0).unwrap();
            let got = v.norm_estimate.unwrap().powi(2);
            assert!(
                (got - want).abs() < 1e-4 * want,
                "{}: {got} vs {want}",
                op.as_transform().label()
            );
        }
    }

    #[test]
    fn bessel_half_matches_dirichlet() {
        let f = catalog("bump(0.5,2.5)");
        let grid = default_grid(100.0);
        let a = transform(&HalflineOperator::new(PI).unwrap(), &f, &grid).unwrap();
        let b = transform(&BesselOperator::new(0.5).unwrap(), &f, &grid).unwrap();
        for (u, v) in a.values.iter().zip(&b.values) {
            assert!((u.norm() - v.norm()).abs() < 1e-8);
        }
    }

    #[test]
    fn csv_round_trip() {
        let f = catalog("bump(1,3)");
        let s = transform(&HalflineOperator::new(PI).unwrap(), &f, &[0.5, 1.0, 4.0]).unwrap();
        let text = s.to_csv();
        assert_eq!(SpectralSamples::from_csv(&text).unwrap().to_csv(), text);
    }
}
