//! Argument definitions and the dispatch from a parsed command line to a [`Report`].

use crate::report::Report;
use crate::suites::{self, Suite};
use crate::{CliError, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ldspec::halfline::{self, BesselOperator, EigenTransform, HalflineOperator};
use ldspec::hermite::{self, MehlerSide};
use ldspec::interpolation::{self, InterpolationPair, Method};
use ldspec::periodic;
use ldspec::spectral::{self, MeasureSpec, ScaleIndex, VectorSpec};
use ldspec::{
    Coefficients, DivergencePolicy, MembershipVerdict, Prediction, SplitMix64, TestFunction,
};
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::path::{Path, PathBuf};

/// Slack for parameters typed with a truncated π.
const ANGLE_SLACK: f64 = 1e-7;

#[derive(Debug, Parser)]
#[command(
    name = "ldspec",
    version,
    about = "Fractional norms and domain membership on left-definite operator scales"
)]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Report format; CSV carries the check table only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Record wall-clock seconds per check.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scale norm of a coefficient vector read from JSON.
    Norm(NormArgs),
    /// Membership of a function or vector in a fractional domain.
    Membership(MembershipArgs),
    /// Mehler kernel value checked against the eigenfunction sum.
    #[command(visible_alias = "kernel")]
    Mehler(MehlerArgs),
    /// Interpolation-space characterizations of a coefficient vector.
    Interp(InterpArgs),
    /// Form inequality on seeded random Hermite combinations.
    FormCheck(FormCheckArgs),
    /// Fractional oscillator norm next to the Sobolev-side prediction.
    HermiteNorm(HermiteNormArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct NormArgs {
    #[arg(long)]
    pub vector: PathBuf,
    /// Measure used for vectors whose `measure` field is a name.
    #[arg(long)]
    pub measure: Option<PathBuf>,
    #[arg(long)]
    pub s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    Periodic,
    Halfline,
    Bessel,
    Oscillator,
    Spectral,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct MembershipArgs {
    #[arg(long, value_enum)]
    pub operator: Operator,
    #[arg(long)]
    pub s: f64,
    /// Catalog entry, e.g. `const`, `hat(1,5)` or `{"fn":"gauss","params":{"mu":0,"sigma":1}}`.
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Periodic truncation `|n| ≤ N`.
    #[arg(long = "N", default_value_t = periodic::DEFAULT_N)]
    #[serde(rename = "N")]
    pub n: usize,
    /// Write spectral samples `(lambda, re, im, density)` as CSV.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[arg(long, default_value_t = 100.0)]
    pub lambda_max: f64,
    #[arg(long)]
    pub vector: Option<PathBuf>,
    #[arg(long)]
    pub measure: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelSide {
    Oscillator,
    Hermite,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct MehlerArgs {
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub y: f64,
    #[arg(long, value_enum, default_value_t = KernelSide::Oscillator)]
    pub side: KernelSide,
    /// Spectral shift of the Hermite side, spectrum `{2m + c}`.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Kfunc,
    Semigroup,
    Resolvent,
    All,
}

#[derive(Debug, Args, Serialize)]
pub struct InterpArgs {
    #[arg(long)]
    pub theta: f64,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long)]
    pub measure: Option<PathBuf>,
    #[arg(long)]
    pub vector: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    pub method: MethodArg,
}

#[derive(Debug, Args, Serialize)]
pub struct FormCheckArgs {
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub terms: usize,
    #[arg(long, default_value_t = 30)]
    pub max_degree: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct HermiteNormArgs {
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub function: String,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// core, sobolev, periodic, halfline, hermite, interp (or interpolation), all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

fn inputs<T: Serialize>(args: &T) -> BTreeMap<String, Value> {
    match serde_json::to_value(args) {
        Ok(Value::Object(m)) => m.into_iter().filter(|(_, v)| !v.is_null()).collect(),
        _ => BTreeMap::new(),
    }
}

fn usage(flag: &str, constraint: &str, got: f64) -> CliError {
    CliError::Usage(format!("invalid --{flag} {got}: must satisfy {constraint}"))
}

pub fn check_s(s: f64) -> Result<f64, CliError> {
    if s >= 0.0 && s.is_finite() {
        Ok(s)
    } else {
        Err(usage("s", "s >= 0", s))
    }
}

pub fn check_phi(phi: f64) -> Result<f64, CliError> {
    if (0.0..periodic::TWO_PI).contains(&phi) {
        Ok(phi)
    } else {
        Err(usage("phi", "0 <= phi < 2*pi", phi))
    }
}

pub fn check_alpha(alpha: f64) -> Result<f64, CliError> {
    if alpha >= FRAC_PI_2 - ANGLE_SLACK && alpha <= PI + ANGLE_SLACK {
        Ok(alpha.clamp(FRAC_PI_2, PI))
    } else {
        Err(usage("alpha", "pi/2 <= alpha <= pi", alpha))
    }
}

pub fn check_gamma(gamma: f64) -> Result<f64, CliError> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(gamma)
    } else {
        Err(usage("gamma", "gamma > 0", gamma))
    }
}

pub fn check_theta(theta: f64) -> Result<f64, CliError> {
    if theta > 0.0 && theta < 1.0 {
        Ok(theta)
    } else {
        Err(usage("theta", "0 < theta < 1", theta))
    }
}

fn require<T: Copy>(v: Option<T>, flag: &str, operator: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--operator {operator} needs --{flag}")))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_measure(path: &Path) -> Result<MeasureSpec, CliError> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Reads a vector; a string `measure` names the `--measure` file, or a file next to the vector.
pub fn load_vector(vector: &Path, measure: Option<&Path>) -> Result<Coefficients, CliError> {
    let spec: VectorSpec = serde_json::from_str(&read(vector)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", vector.display())))?;
    let base = vector.parent().map(Path::to_path_buf).unwrap_or_default();
    let resolve = |name: &str| -> ldspec::Result<MeasureSpec> {
        let path = match measure {
            Some(m) => m.to_path_buf(),
            None => base.join(name),
        };
        load_measure(&path).map_err(|e| ldspec::Error::Input(e.to_string()))
    };
    Ok(spec.build(resolve)?)
}

fn function(spec: Option<&str>) -> Result<TestFunction, CliError> {
    let text =
        spec.ok_or_else(|| CliError::Usage("--function is required for this operator".into()))?;
    Ok(TestFunction::parse(text)?)
}

fn prediction_label(p: &ldspec::Result<Prediction>) -> Option<&'static str> {
    match p {
        Ok(p) if p.is_member() => Some("member"),
        Ok(_) => Some("nonmember"),
        Err(_) => None,
    }
}

#[derive(Serialize)]
struct MembershipResult {
    operator: Operator,
    verdict: MembershipVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    prediction: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    norm: Option<f64>,
}

fn membership(a: &MembershipArgs, ctx: &Context) -> Result<Report, CliError> {
    let s = check_s(a.s)?;
    let mut suite = Suite::new("membership", ctx);
    const AGREE: &str = "spectral verdict against the structural characterization";
    let (verdict, prediction, norm) = match a.operator {
        Operator::Periodic => {
            let phi = check_phi(require(a.phi, "phi", "periodic")?)?;
            let f = function(a.function.as_deref())?;
            let v = periodic::fractional_membership_with(&f, phi, s, a.n)?;
            (v, periodic::characterize(&f, phi, s), None)
        }
        Operator::Halfline | Operator::Bessel => {
            let f = function(a.function.as_deref())?;
            let op: Box<dyn EigenTransform> = if a.operator == Operator::Halfline {
                Box::new(HalflineOperator::new(check_alpha(require(
                    a.alpha, "alpha", "halfline",
                )?)?)?)
            } else {
                Box::new(BesselOperator::new(check_gamma(require(
                    a.gamma, "gamma", "bessel",
                )?)?)?)
            };
            if let Some(path) = &a.samples {
                let samples =
                    halfline::transform(op.as_ref(), &f, &halfline::default_grid(a.lambda_max))?;
                std::fs::write(path, samples.to_csv())
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            let v = halfline::fractional_norm(op.as_ref(), &f, s)?;
            let p = if s > 0.0 && s <= 1.0 {
                halfline::sobolev_domain_predicate(op.as_ref(), &f, s)
            } else {
                Err(ldspec::Error::Capability(
                    "no structural description outside 0 < s <= 1".into(),
                ))
            };
            (v, p, None)
        }
        Operator::Oscillator => {
            let f = function(a.function.as_deref())?;
            let v = hermite::oscillator_fractional_norm(&f, s)?;
            let p = if s > 0.0 {
                hermite::sobolev_side_membership(&f, 0.5 * s)
            } else {
                Ok(Prediction::PredictedMember)
            };
            (v, p, None)
        }
        Operator::Spectral => {
            let path = a
                .vector
                .as_deref()
                .ok_or_else(|| CliError::Usage("--operator spectral needs --vector".into()))?;
            let x = load_vector(path, a.measure.as_deref())?;
            let v = spectral::membership(&x, ScaleIndex::new(s)?, &DivergencePolicy::default());
            let n = spectral::scale_norm(&x, ScaleIndex::new(s)?)?;
            (
                v,
                Err(ldspec::Error::Capability(
                    "no structural description".into(),
                )),
                Some(n),
            )
        }
    };
    let label = prediction_label(&prediction);
    if label.is_some() {
        suite.verdict("agreement", prediction, &verdict, AGREE);
    }
    let result = MembershipResult {
        operator: a.operator,
        verdict,
        prediction: label,
        norm,
    };
    Ok(Report::new("membership", inputs(a))
        .with_result(&result)?
        .finish(suite.checks, false))
}

#[derive(Serialize)]
struct NormResult {
    norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncation_bound: Option<f64>,
    verdict: MembershipVerdict,
}

fn norm(a: &NormArgs) -> Result<Report, CliError> {
    let s = check_s(a.s)?;
    let x = load_vector(&a.vector, a.measure.as_deref())?;
    let (norm, truncation_bound) = spectral::scale_norm_with_bound(&x, ScaleIndex::new(s)?)?;
    let verdict = spectral::membership(&x, ScaleIndex::new(s)?, &DivergencePolicy::default());
    let result = NormResult {
        norm,
        truncation_bound,
        verdict,
    };
    Ok(Report::new("norm", inputs(a))
        .with_result(&result)?
        .finish(Vec::new(), false))
}

#[derive(Serialize)]
struct MehlerResult {
    kernel: f64,
    eigensum: f64,
    terms: usize,
}

/// Eigen-sum length with truncation error below `e^{−24}` of the leading term.
fn eigensum_terms(t: f64) -> usize {
    ((12.0 / t).ceil() as usize).clamp(200, 200_000)
}

fn mehler(a: &MehlerArgs, ctx: &Context) -> Result<Report, CliError> {
    if !(a.t > 0.0 && a.t.is_finite()) {
        return Err(usage("t", "t > 0", a.t));
    }
    let side = match a.side {
        KernelSide::Oscillator => MehlerSide::Oscillator,
        KernelSide::Hermite => {
            if !(a.c > 0.0 && a.c.is_finite()) {
                return Err(usage("c", "c > 0", a.c));
            }
            MehlerSide::Hermite { c: a.c }
        }
    };
    let kernel = hermite::mehler_kernel(a.t, a.x, a.y, side)?;
    let terms = eigensum_terms(a.t);
    let mut eigensum = hermite::mehler_eigensum(a.t, a.x, a.y, terms);
    if let MehlerSide::Hermite { c } = side {
        eigensum *= (0.5 * (a.x * a.x + a.y * a.y) - a.t * (c - 1.0)).exp();
    }
    let mut suite = Suite::new("mehler", ctx);
    suite.close(
        "eigensum",
        kernel,
        eigensum,
        1e-8 * kernel.abs().max(1.0),
        "Mehler kernel against the eigenfunction expansion",
    );
    let result = MehlerResult {
        kernel,
        eigensum,
        terms,
    };
    Ok(Report::new("mehler", inputs(a))
        .with_result(&result)?
        .finish(suite.checks, false))
}

#[derive(Serialize)]
struct MethodResult {
    method: &'static str,
    value: f64,
    constant: f64,
    verdict: MembershipVerdict,
    agrees: Option<bool>,
}

#[derive(Serialize)]
struct InterpResult {
    k: u32,
    theta: f64,
    domain_index: f64,
    direct: MembershipVerdict,
    methods: Vec<MethodResult>,
    agree: bool,
}

fn interp(a: &InterpArgs, ctx: &Context) -> Result<Report, CliError> {
    let theta = check_theta(a.theta)?;
    let pair = InterpolationPair::new(a.k, theta)?;
    let x = load_vector(&a.vector, a.measure.as_deref())?;
    let methods: Vec<Method> = match a.method {
        MethodArg::Kfunc => vec![Method::KFunctional],
        MethodArg::Semigroup => vec![Method::Semigroup],
        MethodArg::Resolvent => vec![Method::Resolvent],
        MethodArg::All => Method::ALL.to_vec(),
    };
    let cmp = interpolation::compare(&x, &pair, &methods)?;
    let mut suite = Suite::new("interp", ctx);
    const AGREE: &str = "interpolation space equals the domain of A^(k theta)";
    let direct = cmp
        .direct
        .is_determinate()
        .then(|| Prediction::from_bool(cmp.direct.is_member()));
    let mut out = Vec::new();
    for r in cmp.results {
        let p =
            direct.ok_or_else(|| ldspec::Error::Capability("direct verdict inconclusive".into()));
        suite.verdict(
            &format!("agreement/{}", r.method.name()),
            p,
            &r.verdict,
            AGREE,
        );
        let agrees = (r.verdict.is_determinate() && cmp.direct.is_determinate())
            .then(|| r.verdict.status == cmp.direct.status);
        out.push(MethodResult {
            method: r.method.name(),
            value: r.value,
            constant: r.constant,
            verdict: r.verdict,
            agrees,
        });
    }
    let result = InterpResult {
        k: a.k,
        theta,
        domain_index: pair.domain_index(),
        direct: cmp.direct,
        methods: out,
        agree: cmp.agree,
    };
    Ok(Report::new("interp", inputs(a))
        .with_result(&result)?
        .finish(suite.checks, false))
}

#[derive(Serialize)]
struct FormResult {
    k: usize,
    a_k: f64,
    b_k: f64,
    trials: usize,
    violations: usize,
    min_slack: f64,
}

fn form_check(a: &FormCheckArgs, ctx: &Context) -> Result<Report, CliError> {
    if a.trials == 0 {
        return Err(CliError::Usage(
            "invalid --trials 0: must satisfy trials >= 1".into(),
        ));
    }
    let mut rng = SplitMix64::new(a.seed);
    let reports = suites::form_trials(&mut rng, a.k, a.trials, a.terms, a.max_degree)?;
    let violations = reports.iter().filter(|r| !r.holds).count();
    let mut suite = Suite::new("form-check", ctx);
    suite.close(
        &format!("k{}/violations", a.k),
        violations as f64,
        0.0,
        0.0,
        "form inequality P^4k + X^4k <= a_k H^2k + b_k",
    );
    let result = FormResult {
        k: a.k,
        a_k: reports[0].a_k,
        b_k: reports[0].b_k,
        trials: a.trials,
        violations,
        min_slack: reports
            .iter()
            .map(|r| r.slack)
            .fold(f64::INFINITY, f64::min),
    };
    Ok(Report::new("form-check", inputs(a))
        .with_result(&result)?
        .finish(suite.checks, false))
}

fn hermite_norm(a: &HermiteNormArgs, ctx: &Context) -> Result<Report, CliError> {
    let s = check_s(a.s)?;
    let f = TestFunction::parse(&a.function)?;
    let verdict = hermite::oscillator_fractional_norm(&f, s)?;
    let prediction = if s > 0.0 {
        hermite::sobolev_side_membership(&f, 0.5 * s)
    } else {
        Ok(Prediction::PredictedMember)
    };
    let label = prediction_label(&prediction);
    let mut suite = Suite::new("hermite-norm", ctx);
    if label.is_some() {
        suite.verdict(
            "agreement",
            prediction,
            &verdict,
            "oscillator domains equal Sobolev spaces with moments",
        );
    }
    let result = MembershipResult {
        operator: Operator::Oscillator,
        verdict,
        prediction: label,
        norm: None,
    };
    Ok(Report::new("hermite-norm", inputs(a))
        .with_result(&result)?
        .finish(suite.checks, false))
}

fn verify(a: &VerifyArgs, ctx: &Context) -> Result<Report, CliError> {
    let ctx = Context {
        seed: a.seed,
        ..*ctx
    };
    let checks = suites::run(&a.suite, &ctx)?;
    let mut echo = inputs(a);
    echo.insert(
        "suite".into(),
        Value::String(suites::canonical(&a.suite)?.to_string()),
    );
    Ok(Report::new("verify", echo).finish(checks, true))
}

/// Runs one parsed command.
pub fn run(command: &Command, ctx: &Context) -> Result<Report, CliError> {
    let mut report = match command {
        Command::Norm(a) => norm(a),
        Command::Membership(a) => membership(a, ctx),
        Command::Mehler(a) => mehler(a, ctx),
        Command::Interp(a) => interp(a, ctx),
        Command::FormCheck(a) => form_check(a, ctx),
        Command::HermiteNorm(a) => hermite_norm(a, ctx),
        Command::Verify(a) => verify(a, ctx),
    }?;
    if ctx.tol_scale != 1.0 {
        report
            .inputs
            .insert("tol_scale".into(), Value::from(ctx.tol_scale));
    }
    Ok(report)
}
