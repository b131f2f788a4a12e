//! Executable checks of the module invariants, grouped by suite.

use crate::report::Check;
use crate::{CliError, Context};
use ldspec::halfline::{self, BesselOperator, EigenTransform, HalflineOperator};
use ldspec::hermite::{
    self, basis::normalized_hermite, GaussHermite, MehlerSide, OscillatorState, Side,
};
use ldspec::interpolation::{self, InterpolationPair, Method};
use ldspec::periodic::{self, PeriodicOperator, TWO_PI};
use ldspec::sobolev::{self, Domain, GagliardoConfig};
use ldspec::spectral::{self, Atom, CoefficientVector, ScaleIndex, SpectralMeasure, Tail};
use ldspec::{catalog, DivergencePolicy, MembershipVerdict, Prediction, SplitMix64};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::sync::Arc;
use std::time::Instant;

pub const SUITES: [&str; 6] = [
    "core", "sobolev", "periodic", "halfline", "hermite", "interp",
];

/// Canonical suite name; `interpolation` is accepted for `interp`.
pub fn canonical(name: &str) -> Result<&'static str, CliError> {
    match name {
        "all" => Ok("all"),
        "interpolation" => Ok("interp"),
        _ => SUITES.iter().copied().find(|s| *s == name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown suite {name:?} (expected one of {}, interpolation, all)",
                SUITES.join(", ")
            ))
        }),
    }
}

pub fn run(name: &str, ctx: &Context) -> Result<Vec<Check>, CliError> {
    let name = canonical(name)?;
    let selected: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else {
        vec![name]
    };
    let mut out = Vec::new();
    for s in selected {
        let mut suite = Suite::new(s, ctx);
        match s {
            "core" => core(&mut suite),
            "sobolev" => sobolev_suite(&mut suite),
            "periodic" => periodic_suite(&mut suite),
            "halfline" => halfline_suite(&mut suite),
            "hermite" => hermite_suite(&mut suite),
            _ => interp_suite(&mut suite),
        }
        out.extend(suite.checks);
    }
    Ok(out)
}

/// Check collector for one suite; names are prefixed with the suite.
pub struct Suite<'a> {
    prefix: &'static str,
    ctx: &'a Context,
    pub checks: Vec<Check>,
}

impl<'a> Suite<'a> {
    pub fn new(prefix: &'static str, ctx: &'a Context) -> Self {
        Self {
            prefix,
            ctx,
            checks: Vec::new(),
        }
    }

    fn name(&self, n: &str) -> String {
        format!("{}/{n}", self.prefix)
    }

    /// `|measured − expected| ≤ tol`, with `tol` scaled.
    pub fn close(&mut self, n: &str, measured: f64, expected: f64, tol: f64, r: &str) {
        let c = Check::compare(self.name(n), measured, expected, self.ctx.tol(tol), r);
        self.checks.push(c);
    }

    /// Relative tolerance against `|expected|`.
    pub fn rel(&mut self, n: &str, measured: f64, expected: f64, rtol: f64, r: &str) {
        let scale = if expected == 0.0 { 1.0 } else { expected.abs() };
        self.close(n, measured, expected, rtol * scale, r);
    }

    pub fn flag(&mut self, n: &str, ok: bool, r: &str) {
        let c = Check::flag(self.name(n), ok, r);
        self.checks.push(c);
    }

    /// A membership verdict against a prediction; skipped when either side is inconclusive.
    pub fn verdict(
        &mut self,
        n: &str,
        prediction: ldspec::Result<Prediction>,
        v: &MembershipVerdict,
        r: &str,
    ) {
        let code = |m: bool| if m { 1.0 } else { 0.0 };
        let measured = v.is_determinate().then(|| code(v.is_member()));
        match prediction {
            Ok(p) if v.is_determinate() => {
                let c = Check::compare(
                    self.name(n),
                    code(v.is_member()),
                    code(p.is_member()),
                    0.0,
                    r,
                );
                self.checks.push(c);
            }
            Ok(p) => self.checks.push(Check::skip(
                self.name(n),
                measured,
                Some(code(p.is_member())),
                r,
            )),
            Err(e) if e.is_capability() => {
                self.checks
                    .push(Check::skip(self.name(n), measured, None, r))
            }
            Err(e) => {
                eprintln!("{}: {e}", self.name(n));
                self.checks.push(Check::failed(self.name(n), r));
            }
        }
    }

    /// Runs `f`; an error becomes a failed check named `n`. With timings on,
    /// every check added by `f` carries the elapsed time of the group.
    pub fn group<F>(&mut self, n: &str, r: &str, f: F)
    where
        F: FnOnce(&mut Self) -> ldspec::Result<()>,
    {
        let start = Instant::now();
        let before = self.checks.len();
        if let Err(e) = f(self) {
            eprintln!("{}: {e}", self.name(n));
            let c = Check::failed(self.name(n), r);
            self.checks.push(c);
        }
        if self.ctx.timings {
            let secs = start.elapsed().as_secs_f64();
            for c in &mut self.checks[before..] {
                c.seconds = Some(secs);
            }
        }
    }
}

fn lattice(n: usize) -> Arc<SpectralMeasure<f64>> {
    Arc::new(SpectralMeasure::lattice(n, |k| k as f64).expect("lattice"))
}

fn real(v: impl IntoIterator<Item = f64>) -> Vec<Complex64> {
    v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
}

fn scale(s: f64) -> ldspec::Result<ScaleIndex<f64>> {
    ScaleIndex::new(s)
}

/// A finite vector on random atoms `λ ≥ 1` with random weights.
fn random_vector(rng: &mut SplitMix64, n: usize) -> ldspec::Result<CoefficientVector<f64>> {
    let mut lambda = 1.0;
    let atoms = (0..n)
        .map(|_| {
            let a = Atom {
                lambda,
                weight: rng.uniform(0.1, 2.0),
            };
            lambda += rng.uniform(0.1, 3.0);
            a
        })
        .collect();
    let m = Arc::new(SpectralMeasure::discrete(atoms)?);
    let coeffs = (0..n)
        .map(|_| Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
        .collect();
    CoefficientVector::discrete(m, coeffs, Tail::Exact)
}

const GRID: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

fn core(s: &mut Suite) {
    const NORM: &str = "scale norm (sum lambda^s |c|^2 w)^(1/2)";
    const MEMBER: &str = "domain membership by partial-sum slope";
    const PARSEVAL: &str = "Parseval identity at s = 0";
    const MONO: &str = "monotone scale of spaces";
    const RESTRICT: &str = "restriction identity for the left-definite operator";
    const ISO: &str = "isometry between scale levels";
    const WITNESS: &str = "strict inclusion of scale spaces";

    s.group("norm-examples", NORM, |s| {
        let atom = Arc::new(SpectralMeasure::discrete(vec![Atom {
            lambda: 1.0,
            weight: 1.0,
        }])?);
        let v = CoefficientVector::discrete(atom, real([1.0]), Tail::Exact)?;
        s.close(
            "norm-examples/unit-atom",
            spectral::scale_norm(&v, scale(2.0)?)?,
            1.0,
            1e-15,
            NORM,
        );
        let h = CoefficientVector::discrete(
            lattice(10),
            real((1..=10).map(|n| 1.0 / n as f64)),
            Tail::Exact,
        )?;
        let want: f64 = (1..=10).map(|n| (n as f64).powi(-2)).sum::<f64>().sqrt();
        s.rel(
            "norm-examples/harmonic-s0",
            spectral::scale_norm(&h, scale(0.0)?)?,
            want,
            1e-14,
            NORM,
        );
        s.rel(
            "norm-examples/harmonic-s2",
            spectral::scale_norm(&h, scale(2.0)?)?,
            10f64.sqrt(),
            1e-14,
            NORM,
        );
        Ok(())
    });

    s.group("membership-examples", MEMBER, |s| {
        let policy = DivergencePolicy::default();
        let n = policy.max_checkpoint();
        let geo = CoefficientVector::from_fn(lattice(n), |_, i| 0.5f64.powi(i as i32))?;
        let harm = CoefficientVector::from_fn(lattice(n), |_, i| 1.0 / i as f64)?;
        for (name, v, sc, member) in [
            ("membership-examples/geometric-s3", &geo, 3.0, true),
            ("membership-examples/harmonic-s1", &harm, 1.0, false),
            ("membership-examples/harmonic-s0.5", &harm, 0.5, true),
        ] {
            let verdict = spectral::membership(v, scale(sc)?, &policy);
            s.verdict(name, Ok(Prediction::from_bool(member)), &verdict, MEMBER);
        }
        Ok(())
    });

    let mut rng = SplitMix64::new(s.ctx.seed);
    s.group("parseval", PARSEVAL, |s| {
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let n = 1 + rng.below(64);
            let v = random_vector(&mut rng, n)?;
            let direct: f64 = v
                .coeffs()
                .iter()
                .zip(v.nodes())
                .map(|(c, a)| c.norm_sqr() * a.weight)
                .sum::<f64>()
                .sqrt();
            worst = worst.max((spectral::scale_norm(&v, scale(0.0)?)? / direct - 1.0).abs());
        }
        s.close("parseval/max-rel-error", worst, 0.0, 1e-12, PARSEVAL);
        Ok(())
    });

    s.group("monotonicity", MONO, |s| {
        let policy = DivergencePolicy::default();
        let n = policy.max_checkpoint();
        let mut ok = true;
        for _ in 0..10 {
            let p = rng.uniform(1.6, 3.0);
            let v = CoefficientVector::from_fn(lattice(n), move |_, i| (i as f64).powf(-p))?;
            for (i, &r) in GRID.iter().enumerate() {
                for &q in &GRID[i + 1..] {
                    if !spectral::membership(&v, scale(q)?, &policy).is_member() {
                        continue;
                    }
                    ok &= spectral::membership(&v, scale(r)?, &policy).is_member();
                    ok &= spectral::scale_norm(&v, scale(r)?)?
                        <= spectral::scale_norm(&v, scale(q)?)?;
                }
            }
        }
        s.flag("monotonicity/random-power-vectors", ok, MONO);
        Ok(())
    });

    s.group("restriction", RESTRICT, |s| {
        let policy = DivergencePolicy::default();
        let n = policy.max_checkpoint();
        let v = CoefficientVector::from_fn(lattice(n), |_, i| (i as f64).powi(-3))?;
        let base = spectral::apply_left_definite_operator(&v, scale(0.0)?, &policy)?;
        let mut worst: f64 = 0.0;
        for r in [0.5, 1.0] {
            let g = spectral::apply_left_definite_operator(&v, scale(r)?, &policy)?;
            for (a, b) in g.coeffs().iter().zip(base.coeffs()) {
                worst = worst.max((a - b).norm());
            }
        }
        s.close("restriction/coefficientwise", worst, 0.0, 1e-14, RESTRICT);
        let norm = spectral::scale_norm(&base, scale(0.0)?)?;
        s.rel(
            "restriction/zeta4",
            norm * norm,
            PI.powi(4) / 90.0,
            1e-10,
            RESTRICT,
        );
        let e3 =
            CoefficientVector::discrete(lattice(5), real([0.0, 0.0, 1.0, 0.0, 0.0]), Tail::Exact)?;
        let g = spectral::apply_left_definite_operator(&e3, scale(1.0)?, &policy)?;
        s.close(
            "restriction/unit-vector",
            g.coeffs()[2].re,
            3.0,
            0.0,
            RESTRICT,
        );
        Ok(())
    });

    s.group("isometry", ISO, |s| {
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let v = random_vector(&mut rng, 32)?;
            for &r in &GRID {
                for &q in &GRID {
                    let mapped = v.map_lambda(|l| l.powf(0.5 * (r - q)));
                    for &t in &GRID {
                        let a = spectral::scale_norm(&mapped, scale(q + t)?)?;
                        let b = spectral::scale_norm(&v, scale(r + t)?)?;
                        worst = worst.max((a / b - 1.0).abs());
                    }
                }
            }
        }
        s.close("isometry/max-rel-error", worst, 0.0, 1e-12, ISO);
        Ok(())
    });

    s.group("witness", WITNESS, |s| {
        let policy = DivergencePolicy::default();
        let n = policy.max_checkpoint();
        for (name, r, q) in [("witness/r0-s2", 0.0, 2.0), ("witness/r1-s3", 1.0, 3.0)] {
            let ok = spectral::strict_inclusion_witness(lattice(n), r, q, &policy).is_ok();
            s.flag(name, ok, WITNESS);
        }
        let bounded = Arc::new(SpectralMeasure::lattice(n, |k| 2.0 - 1.0 / k as f64)?);
        let refused = matches!(
            spectral::strict_inclusion_witness(bounded, 0.0, 2.0, &policy),
            Err(ldspec::Error::OperatorBounded(_))
        );
        s.flag("witness/bounded-refused", refused, WITNESS);
        Ok(())
    });
}

fn sobolev_suite(s: &mut Suite) {
    const FOURIER: &str = "Gagliardo seminorm equals C(s) times the Fourier energy";
    const SCALING: &str = "dilation law |f(./h)|^2 = h^(1-2s) |f|^2";
    const SYMMETRY: &str = "symmetric double integrand";
    const EXAMPLES: &str = "closed-form Sobolev norms";

    s.group("fourier-gagliardo", FOURIER, |s| {
        for sv in [0.25, 0.5, 0.75] {
            let c = sobolev::gagliardo_fourier_constant(sv);
            for f in ["gauss(0,1)", "hermite(1)", "hermite(2)"] {
                let g = catalog(f);
                let lhs =
                    sobolev::gagliardo_seminorm(&g, Domain::WholeLine, &GagliardoConfig::new(sv)?)?
                        .powi(2);
                let rhs = sobolev::homogeneous_fourier_energy(&g, sv)?;
                s.rel(
                    &format!("fourier-gagliardo/{f}/s{sv}"),
                    lhs / rhs,
                    c,
                    1e-3,
                    FOURIER,
                );
            }
        }
        Ok(())
    });

    s.group("scaling", SCALING, |s| {
        let g = catalog("gauss(0,1)");
        for sv in [0.25, 0.75] {
            let cfg = GagliardoConfig::new(sv)?;
            let base = sobolev::gagliardo_seminorm(&g, Domain::WholeLine, &cfg)?.powi(2);
            for h in [0.5, 2.0] {
                let v =
                    sobolev::gagliardo_seminorm(&g.dilated(h), Domain::WholeLine, &cfg)?.powi(2);
                s.rel(
                    &format!("scaling/s{sv}/h{h}"),
                    v,
                    h.powf(1.0 - 2.0 * sv) * base,
                    1e-6,
                    SCALING,
                );
            }
        }
        Ok(())
    });

    s.group("symmetry", SYMMETRY, |s| {
        let g = catalog("gauss(0,1)");
        for sv in [0.25, 0.75] {
            let half = GagliardoConfig::new(sv)?;
            let mut full = half;
            full.symmetric = false;
            let a = sobolev::gagliardo_seminorm(&g, Domain::WholeLine, &half)?;
            let b = sobolev::gagliardo_seminorm(&g, Domain::WholeLine, &full)?;
            s.rel(&format!("symmetry/s{sv}"), a, b, 1e-12, SYMMETRY);
        }
        Ok(())
    });

    s.group("examples", EXAMPLES, |s| {
        let g = catalog("gauss(0,1)");
        s.rel(
            "examples/gauss-h0",
            sobolev::hs_norm_fourier(&g, 0.0)?,
            PI.powf(0.25),
            1e-12,
            EXAMPLES,
        );
        s.rel(
            "examples/gauss-h1",
            sobolev::hs_norm_fourier(&g, 1.0)?,
            (1.5 * PI.sqrt()).sqrt(),
            1e-12,
            EXAMPLES,
        );
        let x = sobolev::gagliardo_seminorm(
            &catalog("power(1)"),
            Domain::Interval(0.0, 1.0),
            &GagliardoConfig::new(0.25)?,
        )?;
        s.rel(
            "examples/linear-on-unit-interval",
            x,
            (8.0f64 / 15.0).sqrt(),
            1e-10,
            EXAMPLES,
        );
        let c = sobolev::gagliardo_seminorm(
            &catalog("const(2)"),
            Domain::Interval(0.0, 1.0),
            &GagliardoConfig::new(0.4)?,
        )?;
        s.close("examples/constant", c, 0.0, 0.0, EXAMPLES);
        let sine = sobolev::hs_norm_interval(&catalog("sine(1)"), 0.0, TWO_PI, 1.0)?;
        s.rel("examples/sine-h1", sine, TWO_PI.sqrt(), 1e-12, EXAMPLES);
        Ok(())
    });
}

/// Functions of the periodic agreement matrix.
pub const PERIODIC_MATRIX: [&str; 7] = [
    "const",
    "power(1)",
    "hat(1,5)",
    "bump(1,5)",
    "fourier-mode(2,1.0471975511965976)",
    "fourier-mode(1,0)",
    "gauss(3.141592653589793,1)",
];
pub const PERIODIC_PHASES: [f64; 4] = [0.0, PI / 3.0, PI, 1.5 * PI];
pub const PERIODIC_ORDERS: [f64; 3] = [0.3, 0.5, 0.75];

fn periodic_suite(s: &mut Suite) {
    const FLIP: &str = "threshold s = 1/2 for the antiperiodic constant";
    const AGREE: &str = "boundary-condition characterization of fractional domains";
    const GROUP: &str = "translation-group difference integral";
    const UNITARY: &str = "unitary translation group";
    const EIGEN: &str = "eigenrelation of the periodic-type Laplacian";

    s.group("threshold-flip", FLIP, |s| {
        let one = catalog("const");
        for (sv, member) in [(0.4, true), (0.6, false)] {
            let v = periodic::fractional_membership(&one, PI, sv)?;
            s.verdict(
                &format!("threshold-flip/s{sv}"),
                Ok(Prediction::from_bool(member)),
                &v,
                FLIP,
            );
        }
        Ok(())
    });

    s.group("matrix", AGREE, |s| {
        for f in PERIODIC_MATRIX {
            let g = catalog(f);
            for (i, &phi) in PERIODIC_PHASES.iter().enumerate() {
                for sv in PERIODIC_ORDERS {
                    let v = periodic::fractional_membership(&g, phi, sv)?;
                    let p = periodic::boundary_characterization(&g, phi, sv);
                    s.verdict(&format!("matrix/{f}/phase{i}/s{sv}"), p, &v, AGREE);
                }
            }
        }
        Ok(())
    });

    s.group("group-identity", GROUP, |s| {
        for (f, phi, sv) in [
            ("bump(1,5)", 1.0, 0.3),
            ("hat(1,5)", PI, 0.75),
            ("const", 0.0, 0.75),
            ("const", PI, 0.75),
            ("gauss(3.141592653589793,0.7)", 0.0, 0.5),
        ] {
            let g = catalog(f);
            let split = periodic::split_seminorm_ab(&g, phi, sv)?;
            let c = periodic::analyze(&g, phi, periodic::DEFAULT_N)?;
            let spectral_side = periodic::fractional_membership(&g, phi, sv)?;
            let name = format!("group-identity/{f}/phi{phi:.4}/s{sv}");
            let finite = split.total().is_some_and(f64::is_finite);
            s.verdict(
                &format!("{name}/finiteness"),
                Ok(Prediction::from_bool(finite)),
                &spectral_side,
                GROUP,
            );
            if let (Some(t), true) = (split.total(), spectral_side.is_member()) {
                let coefficient_side = periodic::spectral_group_integral(&c, sv);
                let ratio = if t == 0.0 && coefficient_side == 0.0 {
                    1.0
                } else {
                    t / coefficient_side
                };
                s.close(
                    &format!("{name}/log10-ratio"),
                    ratio.log10().abs(),
                    0.0,
                    2.0,
                    GROUP,
                );
            }
        }
        Ok(())
    });

    let mut rng = SplitMix64::new(s.ctx.seed ^ 0x5045_5249);
    s.group("unitarity", UNITARY, |s| {
        let f = catalog("hat(1,5)");
        let base = sobolev::l2_norm_on(&f, 0.0, TWO_PI).powi(2);
        let mut worst: f64 = 0.0;
        for _ in 0..8 {
            let phi = rng.uniform(0.0, TWO_PI);
            let t = rng.uniform(0.0, TWO_PI);
            worst = worst.max((periodic::translated_norm_sq(&f, phi, t) / base - 1.0).abs());
        }
        s.close("unitarity/max-rel-error", worst, 0.0, 1e-10, UNITARY);
        Ok(())
    });

    s.group("eigenrelation", EIGEN, |s| {
        for phi in [0.0, PI / 3.0, PI] {
            let op = PeriodicOperator::new(phi)?;
            let mut worst: f64 = 0.0;
            for n in [-3, 0, 2] {
                let c =
                    periodic::analyze(&periodic::apply_operator(&op.eigenfunction(n))?, phi, 32)?;
                for (m, z) in c.iter() {
                    let want = if m == n { op.eigenvalue(n) } else { 0.0 };
                    worst = worst.max((z - want).norm());
                }
            }
            s.close(
                &format!("eigenrelation/phi{phi:.4}"),
                worst,
                0.0,
                1e-10,
                EIGEN,
            );
        }
        Ok(())
    });
}

/// Functions on `(0, ∞)` of the half-line agreement matrix.
pub const HALFLINE_MATRIX: [&str; 8] = [
    "bump(1,3)",
    "bump(0,2)",
    "hat(0,2)",
    "hat(1,3)",
    "gauss(0,1)",
    "gauss(1,0.5)",
    "hermite(1)",
    "hermite(2)",
];
pub const HALFLINE_ORDERS: [f64; 4] = [0.3, 0.5, 0.75, 1.0];

pub fn halfline_operators() -> ldspec::Result<Vec<(String, Box<dyn EigenTransform>)>> {
    Ok(vec![
        (
            "alpha-pi/2".to_string(),
            Box::new(HalflineOperator::new(FRAC_PI_2)?) as Box<dyn EigenTransform>,
        ),
        ("alpha-pi".to_string(), Box::new(HalflineOperator::new(PI)?)),
        ("gamma-0.5".to_string(), Box::new(BesselOperator::new(0.5)?)),
        ("gamma-1".to_string(), Box::new(BesselOperator::new(1.0)?)),
        ("gamma-2".to_string(), Box::new(BesselOperator::new(2.0)?)),
    ])
}

pub const BUMPS: [&str; 5] = [
    "bump(1,3)",
    "bump(0.5,2.5)",
    "bump(0,2)",
    "bump(2,6)",
    "bump(0.2,1)",
];

fn halfline_suite(s: &mut Suite) {
    const EIGEN: &str = "eigenrelation under the transform";
    const AGREE: &str = "Sobolev-space description of the fractional domains";
    const DENSITY: &str = "spectral density is the derivative of rho";
    const CROSS: &str = "gamma = 1/2 Bessel operator equals the Dirichlet Laplacian";
    const PARSEVAL: &str = "Parseval identity of the transform";

    s.group("eigenrelation", EIGEN, |s| {
        let f = catalog("bump(1,3)");
        let af = f.derivative_function(2)?.scaled(Complex64::new(-1.0, 0.0));
        for alpha in [FRAC_PI_2, 0.75 * PI, PI] {
            let op = HalflineOperator::new(alpha)?;
            let mut worst: f64 = 0.0;
            for lambda in [0.5, 2.0, 10.0] {
                let lhs = halfline::transform_at(&op, &af, lambda)?;
                let rhs = halfline::transform_at(&op, &f, lambda)? * lambda;
                worst = worst.max((lhs - rhs).norm());
            }
            s.close(
                &format!("eigenrelation/alpha{alpha:.4}"),
                worst,
                0.0,
                1e-6,
                EIGEN,
            );
        }
        Ok(())
    });

    s.group("matrix", AGREE, |s| {
        for (label, op) in halfline_operators()? {
            for f in HALFLINE_MATRIX {
                let g = catalog(f);
                let profile = halfline::profile(op.as_ref(), &g)?;
                for sv in HALFLINE_ORDERS {
                    let v = profile.membership(sv);
                    let p = halfline::sobolev_domain_predicate(op.as_ref(), &g, sv);
                    s.verdict(&format!("matrix/{label}/{f}/s{sv}"), p, &v, AGREE);
                }
            }
        }
        Ok(())
    });

    s.group("density", DENSITY, |s| {
        for i in 0..5 {
            let op = HalflineOperator::new(FRAC_PI_2 + FRAC_PI_2 * i as f64 / 4.0)?;
            let mut worst: f64 = 0.0;
            for j in 0..=12 {
                let l = 0.1 * 1000f64.powf(j as f64 / 12.0);
                let h = 1e-4 * l;
                let d = (op.rho(l + h) - op.rho(l - h)) / (2.0 * h);
                worst = worst.max((d - op.density(l)).abs() / op.density(l).max(1.0));
            }
            s.close(
                &format!("density/alpha{:.4}", op.alpha()),
                worst,
                0.0,
                1e-8,
                DENSITY,
            );
        }
        Ok(())
    });

    s.group("bessel-dirichlet", CROSS, |s| {
        let dir = HalflineOperator::new(PI)?;
        let bes = BesselOperator::new(0.5)?;
        for f in BUMPS {
            let g = catalog(f);
            for sv in [0.0, 0.5, 1.0] {
                let a = halfline::fractional_norm(&dir, &g, sv)?
                    .norm_estimate
                    .unwrap_or(f64::NAN);
                let b = halfline::fractional_norm(&bes, &g, sv)?
                    .norm_estimate
                    .unwrap_or(f64::NAN);
                s.rel(&format!("bessel-dirichlet/{f}/s{sv}"), b, a, 1e-3, CROSS);
            }
        }
        Ok(())
    });

    s.group("parseval", PARSEVAL, |s| {
        for (label, op) in halfline_operators()? {
            for f in ["bump(1,3)", "bump(0,2)"] {
                let p = halfline::profile(op.as_ref(), &catalog(f))?;
                let got = p.membership(0.0).norm_estimate.unwrap_or(f64::NAN).powi(2);
                s.rel(
                    &format!("parseval/{label}/{f}"),
                    got,
                    p.l2_sq,
                    1e-4,
                    PARSEVAL,
                );
            }
        }
        Ok(())
    });
}

/// Pairs `(m, n)` of `K_0..K_6`, `n ∈ {1,2,3}`, `c ∈ {1,2}`: worst relative gap per `(n, c)`.
pub fn two_way_identity_gaps() -> ldspec::Result<Vec<(usize, f64, f64)>> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for c in [1.0, 2.0] {
            let mut worst: f64 = 0.0;
            for i in 0..=6 {
                for j in 0..=6 {
                    let f = OscillatorState::unit(i, Side::Hermite);
                    let g = OscillatorState::unit(j, Side::Hermite);
                    let v = hermite::left_definite_inner_product(&f, &g, n, c)?;
                    let scale = v.spectral_form.norm().max((2.0 * 6.0 + c).powi(n as i32));
                    worst = worst.max(v.relative_gap(scale));
                }
            }
            out.push((n, c, worst));
        }
    }
    Ok(out)
}

/// `max |G − I|` for the Gram matrix of `K_0..K_20` under Gauss–Hermite quadrature.
pub fn gram_deviation(size: usize) -> ldspec::Result<f64> {
    let gh = GaussHermite::new(size + 10)?;
    let values: Vec<Vec<f64>> = gh
        .nodes
        .iter()
        .map(|&x| {
            let (k, ln_s) = normalized_hermite(x, size - 1);
            k.into_iter().map(|v| v * ln_s.exp()).collect()
        })
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..size {
        for j in 0..size {
            let g: f64 = values
                .iter()
                .zip(&gh.weights)
                .map(|(v, w)| w * v[i] * v[j])
                .sum();
            worst = worst.max((g - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    Ok(worst)
}

/// The 25 `(t, x, y)` points of the Mehler check.
pub fn mehler_points() -> Vec<(f64, f64, f64)> {
    let ts = [0.1, 0.25, 0.5, 1.0, 2.0];
    let xs = [
        (-1.5, 0.7),
        (0.0, 0.0),
        (0.3, -0.2),
        (1.0, 1.0),
        (2.5, -1.0),
    ];
    ts.iter()
        .flat_map(|&t| xs.iter().map(move |&(x, y)| (t, x, y)))
        .collect()
}

pub fn mehler_composition_error(t: f64, u: f64, x: f64, y: f64) -> ldspec::Result<f64> {
    let gl = ldspec::quad::GaussLegendre::<f64>::new(16);
    let breaks = ldspec::quad::uniform_breaks(-12.0, 12.0, 96);
    let mut err = None;
    let v = gl.integrate_panels(&breaks, |z| {
        let a = hermite::mehler_kernel(t, x, z, MehlerSide::Oscillator);
        let b = hermite::mehler_kernel(u, z, y, MehlerSide::Oscillator);
        match (a, b) {
            (Ok(a), Ok(b)) => a * b,
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                0.0
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok((v - hermite::mehler_kernel(t + u, x, y, MehlerSide::Oscillator)?).abs())
}

fn hermite_suite(s: &mut Suite) {
    const ORTHO: &str = "orthonormality of the normalized Hermite polynomials";
    const TWO_WAY: &str = "left-definite inner product: derivative form equals spectral form";
    const STIRLING: &str =
        "Stirling coefficients against the symbolic power of the Hermite expression";
    const MEHLER: &str = "Mehler kernel of the oscillator semigroup";
    const UNITARY: &str = "unitary equivalence of oscillator and Hermite sides";
    const TRACE: &str = "resolvent trace-ideal threshold";
    const AGREE: &str = "oscillator domains equal Sobolev spaces with moments";
    const FORM: &str = "form inequality P^4k + X^4k <= a_k H^2k + b_k";

    s.group("orthonormality", ORTHO, |s| {
        s.close(
            "orthonormality/gram-21",
            gram_deviation(21)?,
            0.0,
            1e-10,
            ORTHO,
        );
        Ok(())
    });

    s.group("two-way-identity", TWO_WAY, |s| {
        for (n, c, gap) in two_way_identity_gaps()? {
            s.close(
                &format!("two-way-identity/n{n}/c{c}"),
                gap,
                0.0,
                1e-8,
                TWO_WAY,
            );
        }
        Ok(())
    });

    s.group("stirling", STIRLING, |s| {
        use num_rational::BigRational;
        for n in 1..=3 {
            for c in [1i64, 2] {
                let ok =
                    hermite::stirling::symbolic_check(n, &BigRational::from_integer(c.into()), 8)?;
                s.flag(&format!("stirling/n{n}/c{c}"), ok, STIRLING);
            }
        }
        Ok(())
    });

    s.group("mehler", MEHLER, |s| {
        let mut worst: f64 = 0.0;
        for (t, x, y) in mehler_points() {
            let k = hermite::mehler_kernel(t, x, y, MehlerSide::Oscillator)?;
            worst = worst.max((k - hermite::mehler_eigensum(t, x, y, 200)).abs());
        }
        s.close("mehler/eigensum-25-points", worst, 0.0, 1e-8, MEHLER);
        s.close(
            "mehler/composition",
            mehler_composition_error(0.3, 0.4, 0.5, -0.8)?,
            0.0,
            1e-6,
            MEHLER,
        );
        Ok(())
    });

    let mut rng = SplitMix64::new(s.ctx.seed ^ 0x4845_524d);
    s.group("unitary-equivalence", UNITARY, |s| {
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let f = hermite::random_combination(&mut rng, 10, 30)?;
            let h = OscillatorState::from_coefficients(f.a.clone(), Side::Hermite);
            for sv in [0.25, 0.5, 1.0, 1.5] {
                for c in [1.0, 2.0, 3.5] {
                    let a = f.weighted_norm(sv, 1.0 + (c - 1.0));
                    worst = worst.max((a - h.weighted_norm(sv, c)).abs());
                }
            }
        }
        s.close("unitary-equivalence/weights", worst, 0.0, 0.0, UNITARY);
        Ok(())
    });

    s.group("trace-ideal", TRACE, |s| {
        let a = hermite::resolvent_trace_membership(1.1);
        s.verdict(
            "trace-ideal/p1.1",
            Ok(Prediction::PredictedMember),
            &a,
            TRACE,
        );
        let b = hermite::resolvent_trace_membership(1.0);
        s.verdict(
            "trace-ideal/p1.0",
            Ok(Prediction::PredictedNonMember),
            &b,
            TRACE,
        );
        Ok(())
    });

    s.group("agreement", AGREE, |s| {
        for f in hermite::oscillator::WHOLE_LINE_CATALOG {
            let g = catalog(f);
            for sv in [0.25, 0.5, 1.0, 1.5] {
                let v = hermite::oscillator_domain_membership(&g, sv)?;
                let p = hermite::sobolev_side_membership(&g, sv);
                s.verdict(&format!("agreement/{f}/s{sv}"), p, &v, AGREE);
            }
        }
        Ok(())
    });

    s.group("form-inequality", FORM, |s| {
        for (k, trials) in [(1usize, 100usize), (2, 50)] {
            let violations = form_trials(&mut rng, k, trials, 10, 30)?
                .iter()
                .filter(|r| !r.holds)
                .count();
            s.close(
                &format!("form-inequality/k{k}/violations"),
                violations as f64,
                0.0,
                0.0,
                FORM,
            );
        }
        Ok(())
    });
}

/// Seeded random combinations run through the form inequality.
pub fn form_trials(
    rng: &mut SplitMix64,
    k: usize,
    trials: usize,
    terms: usize,
    max_degree: usize,
) -> ldspec::Result<Vec<hermite::FormReport>> {
    (0..trials)
        .map(|_| {
            hermite::form_inequality_check(&hermite::random_combination(rng, terms, max_degree)?, k)
        })
        .collect()
}

/// `c_n = n^{−p}` on `λ_n = n`.
pub fn power_vector(n: usize, p: f64) -> ldspec::Result<CoefficientVector<f64>> {
    CoefficientVector::from_fn(lattice(n), move |_, i| (i as f64).powf(-p))
}

fn interp_suite(s: &mut Suite) {
    const SCALING: &str = "per-atom scaling of the semigroup characterization";
    const CONSTANTS: &str = "one-atom constants of the characterizations";
    const MONO: &str = "K-functional is nondecreasing in t";
    const STRESS: &str = "interpolation space equals the domain of A^(k theta)";
    const MEHLER: &str = "semigroup integral through the Mehler kernel";

    s.group("scaling", SCALING, |s| {
        for k in [1u32, 2] {
            for th in [0.25, 0.5, 0.75] {
                let pair = InterpolationPair::new(k, th)?;
                let c = interpolation::semigroup_constant(k, th)?;
                for l in [1.0, 10.0, 100.0] {
                    let m = Arc::new(SpectralMeasure::discrete(vec![Atom {
                        lambda: l,
                        weight: 1.0,
                    }])?);
                    let x = CoefficientVector::discrete(m, real([1.0]), Tail::Exact)?;
                    let v = interpolation::semigroup_characterization(&x, &pair)?.value;
                    s.rel(
                        &format!("scaling/k{k}/theta{th}/lambda{l}"),
                        v / l.powf(pair.domain_index()),
                        c,
                        1e-6,
                        SCALING,
                    );
                }
            }
        }
        Ok(())
    });

    s.group("constants", CONSTANTS, |s| {
        s.close(
            "constants/semigroup-k1-half",
            interpolation::semigroup_constant(1, 0.5)?,
            2.0 * LN_2,
            1e-6,
            CONSTANTS,
        );
        s.close(
            "constants/resolvent-k1-half",
            interpolation::resolvent_constant(1, 0.5)?,
            1.0,
            1e-8,
            CONSTANTS,
        );
        Ok(())
    });

    let mut rng = SplitMix64::new(s.ctx.seed ^ 0x494e_5450);
    s.group("k-functional-monotone", MONO, |s| {
        let mut ok = true;
        for _ in 0..5 {
            let x = random_vector(&mut rng, 40)?;
            let pair = InterpolationPair::new(1 + rng.below(3) as u32, rng.uniform(0.05, 0.95))?;
            let mut ts: Vec<f64> = (0..20)
                .map(|_| 10f64.powf(rng.uniform(-6.0, 6.0)))
                .collect();
            ts.sort_by(f64::total_cmp);
            let ks = ts
                .iter()
                .map(|&t| interpolation::k_functional(&x, &pair, t))
                .collect::<ldspec::Result<Vec<_>>>()?;
            ok &= ks.windows(2).all(|w| w[0] <= w[1]);
        }
        s.flag("k-functional-monotone/random", ok, MONO);
        Ok(())
    });

    s.group("stress", STRESS, |s| {
        for k in 1..=3u32 {
            for th in [0.2, 0.4, 0.5, 0.6, 0.8] {
                for eps in [0.05, -0.05] {
                    let pair = InterpolationPair::new(k, th)?;
                    let x = power_vector(2048, 0.5 + k as f64 * th + eps)?;
                    let cmp = interpolation::compare(&x, &pair, &Method::ALL)?;
                    let name = format!("stress/k{k}/theta{th}/eps{eps:+}");
                    s.verdict(
                        &format!("{name}/direct"),
                        Ok(Prediction::from_bool(eps > 0.0)),
                        &cmp.direct,
                        STRESS,
                    );
                    for r in &cmp.results {
                        let p = Ok(Prediction::from_bool(eps > 0.0));
                        s.verdict(
                            &format!("{name}/{}", r.method.name()),
                            p,
                            &r.verdict,
                            STRESS,
                        );
                    }
                }
            }
        }
        Ok(())
    });

    s.group("mehler", MEHLER, |s| {
        let f = OscillatorState::from_coefficients(
            vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, -0.3),
                Complex64::new(0.2, 0.1),
                Complex64::new(0.0, 0.0),
                Complex64::new(-0.4, 0.0),
            ],
            Side::Oscillator,
        );
        for th in [0.25, 0.5] {
            let a = interpolation::oscillator_semigroup_window(&f, th, 0.05, 20.0)?;
            let b = interpolation::mehler_semigroup_window(&f, th, 0.05, 20.0)?;
            s.rel(&format!("mehler/theta{th}"), b, a, 1e-4, MEHLER);
        }
        Ok(())
    });
}
