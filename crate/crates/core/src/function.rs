//! Test functions: analytic catalog entries and user closures with derivative data.

use crate::error::{Error, Result};
use crate::hermite::basis::hermite_functions;
use crate::jet::Jet;
use crate::rng::SplitMix64;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Highest derivative order carried by catalog functions.
pub const MAX_DERIVATIVE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Support {
    Compact(f64, f64),
    WholeLine,
    HalfLine,
}

/// `Finite(k)`: derivatives through order `k` are locally square integrable and
/// `f^{(k)}` may jump at the listed kinks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Smoothness {
    Finite(u32),
    Infinite,
}

impl Smoothness {
    pub fn at_least(self, k: u32) -> bool {
        match self {
            Smoothness::Infinite => true,
            Smoothness::Finite(m) => m >= k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Decay {
    Gaussian,
    /// `|f(x)| ≲ |x|^{−p}`.
    Polynomial(f64),
    Compact,
    None,
}

/// `{"fn": name, "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogSpec {
    #[serde(rename = "fn")]
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

const CATALOG: &[(&str, &[(&str, Option<f64>)])] = &[
    ("const", &[("c", Some(1.0))]),
    ("hat", &[("a", None), ("b", None)]),
    ("gauss", &[("mu", Some(0.0)), ("sigma", Some(1.0))]),
    ("hermite", &[("m", None)]),
    ("power", &[("p", None)]),
    ("fourier-mode", &[("n", None), ("phi", Some(0.0))]),
    ("bump", &[("lo", None), ("hi", None)]),
    ("decay", &[("p", None)]),
    ("abs-gauss", &[]),
    ("sine", &[("k", Some(1.0))]),
];

impl CatalogSpec {
    pub fn new(name: &str, params: &[(&str, f64)]) -> Self {
        Self {
            name: name.to_string(),
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }

    /// Accepts JSON (`{"fn":"gauss",...}`) or call syntax (`gauss(0,1)`, `const`).
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t)
                .map_err(|e| Error::Input(format!("function spec: {e}")));
        }
        let (name, args) = match t.find('(') {
            Some(i) => {
                let inner = t[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Input(format!("unbalanced parentheses in '{t}'")))?;
                (&t[..i], inner)
            }
            None => (t, ""),
        };
        let names = catalog_params(name)?;
        let mut params = BTreeMap::new();
        let values: Vec<&str> = args
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        if values.len() > names.len() {
            return Err(Error::Input(format!(
                "{name} takes at most {} parameters",
                names.len()
            )));
        }
        for (v, (k, _)) in values.iter().zip(names) {
            let x = parse_number(v)?;
            params.insert(k.to_string(), x);
        }
        Ok(Self {
            name: name.to_string(),
            params,
        })
    }

    fn get(&self, key: &str) -> Result<f64> {
        let names = catalog_params(&self.name)?;
        let default = names.iter().find(|(k, _)| *k == key).and_then(|(_, d)| *d);
        self.params
            .get(key)
            .copied()
            .or(default)
            .ok_or_else(|| Error::Input(format!("{} needs parameter '{key}'", self.name)))
    }
}

impl fmt::Display for CatalogSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = catalog_params(&self.name).unwrap_or(&[]);
        let args: Vec<String> = names
            .iter()
            .filter_map(|(k, _)| self.params.get(*k).map(|v| format!("{v}")))
            .collect();
        if args.is_empty() {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}({})", self.name, args.join(","))
        }
    }
}

fn catalog_params(name: &str) -> Result<&'static [(&'static str, Option<f64>)]> {
    CATALOG
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| *p)
        .ok_or_else(|| {
            let known: Vec<&str> = CATALOG.iter().map(|(n, _)| *n).collect();
            Error::Input(format!(
                "unknown function '{name}' (known: {})",
                known.join(", ")
            ))
        })
}

fn parse_number(v: &str) -> Result<f64> {
    let (sign, body) = match v.strip_prefix('-') {
        Some(b) => (-1.0, b),
        None => (1.0, v),
    };
    let x = match body {
        "pi" => PI,
        "2pi" => 2.0 * PI,
        _ => match body.strip_suffix("pi") {
            Some(m) => m.parse::<f64>().map(|m| m * PI),
            None => body.parse::<f64>(),
        }
        .map_err(|_| Error::Input(format!("bad number '{v}'")))?,
    };
    Ok(sign * x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Entry {
    Const(f64),
    Hat(f64, f64),
    Gauss(f64, f64),
    Hermite(usize),
    Power(f64),
    FourierMode(f64),
    Bump(f64, f64),
    Decay(f64),
    AbsGauss,
    Sine(f64),
}

impl Entry {
    fn jet<const N: usize>(self, x: f64) -> Jet<N> {
        let v = Jet::<N>::var(x);
        match self {
            Entry::Const(c) => Jet::real(c),
            Entry::Hat(a, b) => {
                let mid = 0.5 * (a + b);
                let slope = 2.0 / (b - a);
                if x < a || x > b {
                    Jet::real(0.0)
                } else if x < mid {
                    (v + -a) * slope
                } else {
                    (v + -b) * -slope
                }
            }
            Entry::Gauss(mu, sigma) => {
                let u = (v + -mu) * (1.0 / sigma);
                (u * u * -0.5).exp()
            }
            Entry::Hermite(m) => hermite_jet(m, x),
            Entry::Power(p) => {
                if p.fract() == 0.0 && p >= 0.0 {
                    v.powi(p as u32)
                } else if x > 0.0 {
                    v.powf(p)
                } else {
                    Jet::real(0.0)
                }
            }
            Entry::FourierMode(kappa) => {
                v.scale(Complex64::new(0.0, kappa)).exp() * (2.0 * PI).sqrt().recip()
            }
            Entry::Bump(lo, hi) => {
                let u = (v * 2.0 + -(lo + hi)) * (1.0 / (hi - lo));
                let q = Jet::real(1.0) - u * u;
                if q.value().re < 1e-3 {
                    Jet::real(0.0)
                } else {
                    (-(Jet::real(1.0) / q)).exp()
                }
            }
            Entry::Decay(p) => (v * v + 1.0).powf(-0.5 * p),
            Entry::AbsGauss => {
                let s = if x < 0.0 { -1.0 } else { 1.0 };
                v * s * (v * v * -0.5).exp()
            }
            Entry::Sine(k) => (v * k).sin(),
        }
    }
}

impl Entry {
    fn window_and_scale(self) -> (Option<(f64, f64)>, f64) {
        let g = (2.0 * 17.0 * std::f64::consts::LN_10).sqrt();
        match self {
            Entry::Const(_) | Entry::Power(_) => (None, 1.0),
            Entry::Hat(a, b) => (Some((a, b)), 0.25 * (b - a)),
            Entry::Gauss(mu, s) => (Some((mu - g * s, mu + g * s)), 0.25 * s),
            Entry::Hermite(m) => {
                let r = (2.0 * m as f64 + 1.0).sqrt() + g;
                (Some((-r, r)), 0.5 / (2.0 * m as f64 + 1.0).sqrt())
            }
            Entry::FourierMode(k) => (None, 0.25 / k.abs().max(1.0)),
            Entry::Bump(lo, hi) => (Some((lo, hi)), 0.05 * (hi - lo)),
            Entry::Decay(_) => (None, 0.5),
            Entry::AbsGauss => (Some((-g - 1.0, g + 1.0)), 0.25),
            Entry::Sine(k) => (None, 0.25 / k.abs().max(1.0)),
        }
    }
}

fn hermite_jet<const N: usize>(m: usize, x: f64) -> Jet<N> {
    let u = hermite_functions(x, m + N);
    // D e_j = √(j/2) e_{j−1} − √((j+1)/2) e_{j+1}
    let mut vec = vec![0.0; m + N + 1];
    vec[m] = 1.0;
    let mut out = [Complex64::new(0.0, 0.0); N];
    let mut fact = 1.0;
    for (k, slot) in out.iter_mut().enumerate() {
        if k > 0 {
            fact *= k as f64;
            let mut next = vec![0.0; vec.len()];
            for j in 0..vec.len() {
                if vec[j] == 0.0 {
                    continue;
                }
                if j > 0 {
                    next[j - 1] += (j as f64 / 2.0).sqrt() * vec[j];
                }
                if j + 1 < next.len() {
                    next[j + 1] -= ((j + 1) as f64 / 2.0).sqrt() * vec[j];
                }
            }
            vec = next;
        }
        let val: f64 = vec.iter().zip(&u).map(|(a, b)| a * b).sum();
        *slot = Complex64::new(val / fact, 0.0);
    }
    Jet(out)
}

pub type EvalFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;
pub type DerivFn = Arc<dyn Fn(usize, f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Body {
    Catalog(Entry),
    Closure {
        eval: EvalFn,
        deriv: Option<DerivFn>,
        max_order: usize,
    },
    /// Known only through its Fourier transform.
    SpectralOnly,
}

#[derive(Clone)]
pub struct TestFunction {
    name: String,
    spec: Option<CatalogSpec>,
    body: Body,
    support: Support,
    smoothness: Smoothness,
    decay: Decay,
    kinks: Vec<f64>,
    fourier: Option<EvalFn>,
    window: Option<(f64, f64)>,
    scale: f64,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("support", &self.support)
            .field("smoothness", &self.smoothness)
            .field("decay", &self.decay)
            .finish()
    }
}

impl TestFunction {
    pub fn from_spec(spec: &CatalogSpec) -> Result<Self> {
        let name = spec.name.as_str();
        let positive = |k: &str| -> Result<f64> {
            let v = spec.get(k)?;
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Input(format!("{name}: '{k}' must be > 0")))
            }
        };
        let interval = |a: &str, b: &str| -> Result<(f64, f64)> {
            let (lo, hi) = (spec.get(a)?, spec.get(b)?);
            if lo < hi && lo.is_finite() && hi.is_finite() {
                Ok((lo, hi))
            } else {
                Err(Error::Input(format!("{name}: need {a} < {b}")))
            }
        };
        let (entry, support, smoothness, decay, kinks, fourier): (
            _,
            _,
            _,
            _,
            Vec<f64>,
            Option<EvalFn>,
        ) = match name {
            "const" => (
                Entry::Const(spec.get("c")?),
                Support::WholeLine,
                Smoothness::Infinite,
                Decay::None,
                vec![],
                None,
            ),
            "hat" => {
                let (a, b) = interval("a", "b")?;
                (
                    Entry::Hat(a, b),
                    Support::Compact(a, b),
                    Smoothness::Finite(1),
                    Decay::Compact,
                    vec![a, 0.5 * (a + b), b],
                    None,
                )
            }
            "gauss" => {
                let mu = spec.get("mu")?;
                let sigma = positive("sigma")?;
                let ft: EvalFn = Arc::new(move |xi: f64| {
                    Complex64::from_polar(sigma * (-0.5 * sigma * sigma * xi * xi).exp(), -xi * mu)
                });
                (
                    Entry::Gauss(mu, sigma),
                    Support::WholeLine,
                    Smoothness::Infinite,
                    Decay::Gaussian,
                    vec![],
                    Some(ft),
                )
            }
            "hermite" => {
                let m = spec.get("m")?;
                if m < 0.0 || m.fract() != 0.0 || m > 400.0 {
                    return Err(Error::Input(
                        "hermite: m must be an integer in [0, 400]".into(),
                    ));
                }
                let m = m as usize;
                let phase = Complex64::new(0.0, -1.0).powu(m as u32);
                let ft: EvalFn = Arc::new(move |xi: f64| phase * hermite_functions(xi, m)[m]);
                (
                    Entry::Hermite(m),
                    Support::WholeLine,
                    Smoothness::Infinite,
                    Decay::Gaussian,
                    vec![],
                    Some(ft),
                )
            }
            "power" => {
                let p = spec.get("p")?;
                if p < 0.0 {
                    return Err(Error::Input("power: p must be >= 0".into()));
                }
                let smooth = if p.fract() == 0.0 {
                    Smoothness::Infinite
                } else {
                    Smoothness::Finite(p.floor() as u32)
                };
                (
                    Entry::Power(p),
                    Support::HalfLine,
                    smooth,
                    Decay::None,
                    vec![0.0],
                    None,
                )
            }
            "fourier-mode" => {
                let n = spec.get("n")?;
                let phi = spec.get("phi")?;
                if n.fract() != 0.0 {
                    return Err(Error::Input("fourier-mode: n must be an integer".into()));
                }
                (
                    Entry::FourierMode(phi / (2.0 * PI) - n),
                    Support::WholeLine,
                    Smoothness::Infinite,
                    Decay::None,
                    vec![],
                    None,
                )
            }
            "bump" => {
                let (lo, hi) = interval("lo", "hi")?;
                (
                    Entry::Bump(lo, hi),
                    Support::Compact(lo, hi),
                    Smoothness::Infinite,
                    Decay::Compact,
                    vec![],
                    None,
                )
            }
            "decay" => {
                let p = positive("p")?;
                (
                    Entry::Decay(p),
                    Support::WholeLine,
                    Smoothness::Infinite,
                    Decay::Polynomial(p),
                    vec![],
                    None,
                )
            }
            "abs-gauss" => (
                Entry::AbsGauss,
                Support::WholeLine,
                Smoothness::Finite(1),
                Decay::Gaussian,
                vec![0.0],
                None,
            ),
            "sine" => (
                Entry::Sine(spec.get("k")?),
                Support::WholeLine,
                Smoothness::Infinite,
                Decay::None,
                vec![],
                None,
            ),
            _ => {
                return Err(catalog_params(name)
                    .err()
                    .unwrap_or_else(|| Error::Input(name.to_string())))
            }
        };
        let (window, scale) = entry.window_and_scale();
        Ok(Self {
            name: spec.to_string(),
            spec: Some(spec.clone()),
            body: Body::Catalog(entry),
            support,
            smoothness,
            decay,
            kinks,
            fourier,
            window,
            scale,
        })
    }

    /// Shorthand for [`CatalogSpec::parse`] followed by [`Self::from_spec`].
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_spec(&CatalogSpec::parse(text)?)
    }

    /// A user function; supplied derivatives are checked against finite differences.
    pub fn custom(
        name: &str,
        eval: EvalFn,
        deriv: Option<(DerivFn, usize)>,
        support: Support,
        smoothness: Smoothness,
        decay: Decay,
    ) -> Result<Self> {
        let (deriv, max_order) = match deriv {
            Some((d, k)) => (Some(d), k.min(MAX_DERIVATIVE)),
            None => (None, 0),
        };
        let f = Self {
            name: name.to_string(),
            spec: None,
            body: Body::Closure {
                eval,
                deriv,
                max_order,
            },
            support,
            smoothness,
            decay,
            kinks: Vec::new(),
            fourier: None,
            window: match support {
                Support::Compact(a, b) => Some((a, b)),
                _ => None,
            },
            scale: 1.0,
        };
        f.validate_derivatives(0x5eed)?;
        Ok(f)
    }

    /// A function given only by `f̂`, with `|f̂(ξ)| ≲ |ξ|^{−fourier_decay}`.
    pub fn from_fourier(name: &str, ft: EvalFn, fourier_decay: f64) -> Self {
        Self {
            name: name.to_string(),
            spec: None,
            body: Body::SpectralOnly,
            support: Support::WholeLine,
            smoothness: Smoothness::Finite(0),
            decay: Decay::Polynomial(fourier_decay),
            kinks: Vec::new(),
            fourier: Some(ft),
            window: None,
            scale: 1.0,
        }
    }

    pub fn with_kinks(mut self, kinks: Vec<f64>) -> Self {
        self.kinks = kinks;
        self
    }

    /// Declares where the function is non-negligible and its shortest length scale.
    pub fn with_window(mut self, lo: f64, hi: f64, scale: f64) -> Self {
        self.window = Some((lo, hi));
        self.scale = scale;
        self
    }

    /// Interval outside which `|f|` is below `1e−17` of its size, when known.
    pub fn window(&self) -> Option<(f64, f64)> {
        self.window
    }

    /// Length over which the function changes appreciably; sets panel widths.
    pub fn feature_scale(&self) -> f64 {
        self.scale
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> Option<&CatalogSpec> {
        self.spec.as_ref()
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn decay(&self) -> Decay {
        self.decay
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    pub fn has_position_values(&self) -> bool {
        !matches!(self.body, Body::SpectralOnly)
    }

    pub fn require_position_values(&self) -> Result<()> {
        if self.has_position_values() {
            Ok(())
        } else {
            Err(Error::Capability(format!(
                "{} has no position-space values",
                self.name
            )))
        }
    }

    /// Highest available derivative order.
    pub fn max_derivative(&self) -> usize {
        match &self.body {
            Body::Catalog(_) => MAX_DERIVATIVE,
            Body::Closure { max_order, .. } => *max_order,
            Body::SpectralOnly => 0,
        }
    }

    /// Analytic unitary Fourier transform, when registered.
    pub fn analytic_fourier(&self) -> Option<&EvalFn> {
        self.fourier.as_ref()
    }

    /// Value at `x`; zero outside a compact support, NaN for spectral-only functions.
    pub fn eval(&self, x: f64) -> Complex64 {
        if let Support::Compact(a, b) = self.support {
            if x < a || x > b {
                return Complex64::new(0.0, 0.0);
            }
        }
        match &self.body {
            Body::Catalog(e) => e.jet::<1>(x).value(),
            Body::Closure { eval, .. } => eval(x),
            Body::SpectralOnly => Complex64::new(f64::NAN, f64::NAN),
        }
    }

    pub fn derivative(&self, k: usize, x: f64) -> Result<Complex64> {
        if k == 0 {
            return Ok(self.eval(x));
        }
        if k > self.max_derivative() {
            return Err(Error::Capability(format!(
                "{}: derivative of order {k} unavailable (max {})",
                self.name,
                self.max_derivative()
            )));
        }
        if let Support::Compact(a, b) = self.support {
            if x < a || x > b {
                return Ok(Complex64::new(0.0, 0.0));
            }
        }
        Ok(match &self.body {
            Body::Catalog(e) => e.jet::<{ MAX_DERIVATIVE + 1 }>(x).derivative(k),
            Body::Closure { deriv, .. } => {
                deriv
                    .as_ref()
                    .expect("max order > 0 implies derivative data")(k, x)
            }
            Body::SpectralOnly => unreachable!("spectral-only functions carry no derivatives"),
        })
    }

    /// `f^{(k)}` as a function in its own right.
    pub fn derivative_function(&self, k: usize) -> Result<TestFunction> {
        if k == 0 {
            return Ok(self.clone());
        }
        self.derivative(k, 0.0)?;
        let (a, b) = (self.clone(), self.clone());
        let rest = self.max_derivative() - k;
        let smoothness = match self.smoothness {
            Smoothness::Infinite => Smoothness::Infinite,
            Smoothness::Finite(m) => Smoothness::Finite(m.saturating_sub(k as u32)),
        };
        Ok(Self {
            name: format!("d{k}[{}]", self.name),
            spec: None,
            body: Body::Closure {
                eval: Arc::new(move |x| a.derivative(k, x).expect("checked order")),
                deriv: Some(Arc::new(move |j, x| {
                    b.derivative(k + j, x).expect("checked order")
                })),
                max_order: rest,
            },
            support: self.support,
            smoothness,
            decay: self.decay,
            kinks: self.kinks.clone(),
            fourier: None,
            window: self.window,
            scale: self.scale,
        })
    }

    /// `c · f`.
    pub fn scaled(&self, c: Complex64) -> TestFunction {
        let (a, b) = (self.clone(), self.clone());
        let mut out = self.clone();
        out.name = format!("{c}*{}", self.name);
        out.spec = None;
        out.fourier = self
            .fourier
            .clone()
            .map(|ft| -> EvalFn { Arc::new(move |xi| ft(xi) * c) });
        out.body = Body::Closure {
            eval: Arc::new(move |x| a.eval(x) * c),
            deriv: Some(Arc::new(move |j, x| {
                b.derivative(j, x).expect("order within range") * c
            })),
            max_order: self.max_derivative(),
        };
        out
    }

    /// `x ↦ f(x/h)`.
    pub fn dilated(&self, h: f64) -> TestFunction {
        let (a, b) = (self.clone(), self.clone());
        let support = match self.support {
            Support::Compact(lo, hi) => Support::Compact(lo * h, hi * h),
            s => s,
        };
        let fourier = self
            .fourier
            .clone()
            .map(|ft| -> EvalFn { Arc::new(move |xi| ft(xi * h) * h) });
        Self {
            name: format!("{}(x/{h})", self.name),
            spec: None,
            body: Body::Closure {
                eval: Arc::new(move |x| a.eval(x / h)),
                deriv: Some(Arc::new(move |j, x| {
                    b.derivative(j, x / h).expect("order within range") * h.powi(-(j as i32))
                })),
                max_order: self.max_derivative(),
            },
            support,
            smoothness: self.smoothness,
            decay: self.decay,
            kinks: self.kinks.iter().map(|k| k * h).collect(),
            fourier,
            window: self.window.map(|(a, b)| (a * h, b * h)),
            scale: self.scale * h,
        }
    }

    /// Compares each derivative with a five-point difference of the one below it.
    pub fn validate_derivatives(&self, seed: u64) -> Result<()> {
        if self.max_derivative() == 0 {
            return Ok(());
        }
        let (lo, hi) = match self.support {
            Support::Compact(a, b) => (a, b),
            Support::WholeLine => (-3.0, 3.0),
            Support::HalfLine => (0.1, 5.0),
        };
        let mut rng = SplitMix64::new(seed);
        let h = 1e-3 * (hi - lo).min(2.0 * self.scale).max(1e-3);
        let mut checked = 0;
        let mut tries = 0;
        while checked < 10 && tries < 1000 {
            tries += 1;
            let x = rng.uniform(lo, hi);
            if self.kinks.iter().any(|k| (x - k).abs() < 3.0 * h)
                || x - 2.0 * h < lo
                || x + 2.0 * h > hi
            {
                continue;
            }
            checked += 1;
            for k in 1..=self.max_derivative() {
                let g = |t: f64| self.derivative(k - 1, t);
                let fd = (g(x - 2.0 * h)? - g(x + 2.0 * h)? + (g(x + h)? - g(x - h)?) * 8.0)
                    / (12.0 * h);
                let exact = self.derivative(k, x)?;
                let scale = exact.norm().max(fd.norm()).max(1.0);
                if (fd - exact).norm() > 1e-6 * scale {
                    return Err(Error::Input(format!(
                        "{}: derivative of order {k} disagrees with finite differences at x = {x} ({exact} vs {fd})",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Named catalog functions with their parameters, for suites and tests.
pub fn catalog(text: &str) -> TestFunction {
    TestFunction::parse(text).unwrap_or_else(|e| panic!("catalog entry '{text}': {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let a = CatalogSpec::parse("gauss(0.5, 2)").unwrap();
        assert_eq!(a.params["mu"], 0.5);
        assert_eq!(a.params["sigma"], 2.0);
        let b = CatalogSpec::parse(r#"{"fn":"gauss","params":{"mu":0,"sigma":1}}"#).unwrap();
        assert_eq!(b.name, "gauss");
        let c = CatalogSpec::parse("fourier-mode(3, pi)").unwrap();
        assert!((c.params["phi"] - PI).abs() < 1e-15);
        assert!(CatalogSpec::parse("nope").is_err());
        assert!(TestFunction::parse("hat(2,1)").is_err());
        assert!(TestFunction::parse("hat(1)").is_err());
        assert_eq!(TestFunction::parse("const").unwrap().eval(4.0).re, 1.0);
    }

    #[test]
    fn catalog_values() {
        assert_eq!(catalog("hat(0,2)").eval(0.5).re, 0.5);
        assert_eq!(catalog("hat(0,2)").eval(3.0).re, 0.0);
        assert!((catalog("gauss(1,2)").eval(3.0).re - (-0.5f64).exp()).abs() < 1e-15);
        let u0 = catalog("hermite(0)").eval(0.3).re;
        assert!((u0 - PI.powf(-0.25) * (-0.045f64).exp()).abs() < 1e-15);
        let m = catalog("fourier-mode(3,0)").eval(1.0);
        assert!((m - Complex64::from_polar((2.0 * PI).sqrt().recip(), -3.0)).norm() < 1e-15);
        assert_eq!(catalog("power(1)").eval(2.5).re, 2.5);
        assert!((catalog("decay(2)").eval(1.0).re - 0.5).abs() < 1e-15);
        assert_eq!(catalog("bump(0,1)").eval(1.5).re, 0.0);
        assert!((catalog("bump(0,2)").eval(1.0).re - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn catalog_derivatives_pass_registration_check() {
        for name in [
            "gauss(0.3,0.8)",
            "hermite(5)",
            "hat(-1,2)",
            "bump(-1,1)",
            "decay(1.5)",
            "abs-gauss",
            "sine(2)",
            "fourier-mode(2,1)",
            "power(2.5)",
        ] {
            catalog(name).validate_derivatives(7).unwrap();
        }
    }

    #[test]
    fn custom_rejects_wrong_derivatives() {
        let eval: EvalFn = Arc::new(|x: f64| Complex64::new(x.sin(), 0.0));
        let good: DerivFn = Arc::new(|k, x: f64| {
            let v = [x.sin(), x.cos(), -x.sin(), -x.cos(), x.sin()][k];
            Complex64::new(v, 0.0)
        });
        let bad: DerivFn = Arc::new(|_, x: f64| Complex64::new(x.cos(), 0.0));
        let ok = TestFunction::custom(
            "sin",
            eval.clone(),
            Some((good, 4)),
            Support::WholeLine,
            Smoothness::Infinite,
            Decay::None,
        );
        assert!(ok.is_ok());
        let err = TestFunction::custom(
            "sin",
            eval,
            Some((bad, 2)),
            Support::WholeLine,
            Smoothness::Infinite,
            Decay::None,
        );
        assert!(err.is_err());
    }

    #[test]
    fn derivative_function_and_dilation() {
        let g = catalog("gauss(0,1)");
        let d = g.derivative_function(1).unwrap();
        assert!((d.eval(0.5).re + 0.5 * (-0.125f64).exp()).abs() < 1e-15);
        assert!((d.derivative(1, 0.5).unwrap() - g.derivative(2, 0.5).unwrap()).norm() < 1e-15);
        let h = g.dilated(2.0);
        assert!((h.eval(1.0).re - g.eval(0.5).re).abs() < 1e-15);
        assert!(
            (h.derivative(1, 1.0).unwrap() - g.derivative(1, 0.5).unwrap() * 0.5).norm() < 1e-15
        );
        h.validate_derivatives(3).unwrap();
    }
}
