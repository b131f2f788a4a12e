//! One line per acceptance criterion; exits nonzero if any fails.

use ldspec::halfline::{self, BesselOperator, HalflineOperator};
use ldspec::hermite::{self, MehlerSide};
use ldspec::interpolation::{self, InterpolationPair, Method};
use ldspec::periodic;
use ldspec::spectral::{self, Atom, SpectralMeasure};
use ldspec::{catalog, DivergencePolicy, MembershipVerdict, Prediction, SplitMix64};
use ldspec_cli::suites;
use num_rational::BigRational;
use std::f64::consts::{LN_2, PI};
use std::sync::Arc;
use std::time::Instant;

type Outcome = ldspec::Result<(bool, String)>;

/// Agreement tally over determinate verdicts.
#[derive(Default)]
struct Tally {
    agree: usize,
    disagree: Vec<String>,
    undecided: usize,
}

impl Tally {
    fn add(&mut self, name: String, p: ldspec::Result<Prediction>, v: &MembershipVerdict) {
        match p.map(|p| p.agrees_with(v)) {
            Ok(Some(true)) => self.agree += 1,
            Ok(Some(false)) => self.disagree.push(name),
            Ok(None) | Err(_) => self.undecided += 1,
        }
    }

    fn ok(&self) -> bool {
        self.disagree.is_empty() && self.agree > 0
    }

    fn summary(&self) -> String {
        let mut s = format!("{} agree, {} indeterminate", self.agree, self.undecided);
        if !self.disagree.is_empty() {
            s += &format!(", disagree: {}", self.disagree.join(" "));
        }
        s
    }
}

fn orthonormality() -> Outcome {
    let d = suites::gram_deviation(21)?;
    Ok((d < 1e-10, format!("max |G - I| = {d:.2e}")))
}

fn two_way_identity() -> Outcome {
    let gaps = suites::two_way_identity_gaps()?;
    let worst = gaps.iter().map(|g| g.2).fold(0.0, f64::max);
    let mut stirling = true;
    for n in 1..=3 {
        for c in [1i64, 2] {
            stirling &=
                hermite::stirling::symbolic_check(n, &BigRational::from_integer(c.into()), 8)?;
        }
    }
    Ok((
        worst < 1e-8 && stirling,
        format!("max relative gap {worst:.2e}, Stirling table symbolic {stirling}"),
    ))
}

fn mehler() -> Outcome {
    let mut worst: f64 = 0.0;
    for (t, x, y) in suites::mehler_points() {
        let k = hermite::mehler_kernel(t, x, y, MehlerSide::Oscillator)?;
        worst = worst.max((k - hermite::mehler_eigensum(t, x, y, 200)).abs());
    }
    let comp = suites::mehler_composition_error(0.3, 0.4, 0.5, -0.8)?;
    Ok((
        worst < 1e-8 && comp < 1e-6,
        format!("eigensum {worst:.2e} on 25 points, composition {comp:.2e}"),
    ))
}

fn oscillator_domains() -> Outcome {
    let mut t = Tally::default();
    for f in hermite::oscillator::WHOLE_LINE_CATALOG {
        let g = catalog(f);
        for s in [0.25, 0.5, 1.0, 1.5] {
            let v = hermite::oscillator_domain_membership(&g, s)?;
            t.add(
                format!("{f}/s{s}"),
                hermite::sobolev_side_membership(&g, s),
                &v,
            );
        }
    }
    let n = hermite::oscillator::WHOLE_LINE_CATALOG.len();
    Ok((t.ok() && n >= 12, format!("{n} functions: {}", t.summary())))
}

fn form_inequality() -> Outcome {
    let (a1, b1) = hermite::form_constants(1)?;
    let constants =
        a1 == BigRational::from_integer(1.into()) && b1 == BigRational::from_integer(2.into());
    let mut rng = SplitMix64::new(42);
    let k1 = suites::form_trials(&mut rng, 1, 100, 10, 30)?
        .iter()
        .filter(|r| !r.holds)
        .count();
    let k2 = suites::form_trials(&mut rng, 2, 50, 10, 30)?
        .iter()
        .filter(|r| !r.holds)
        .count();
    Ok((
        constants && k1 == 0 && k2 == 0,
        format!("a_1 = {a1}, b_1 = {b1}; violations k=1: {k1}/100, k=2: {k2}/50"),
    ))
}

fn periodic_threshold() -> Outcome {
    let one = catalog("const");
    let below = periodic::fractional_membership(&one, PI, 0.4)?;
    let above = periodic::fractional_membership(&one, PI, 0.6)?;
    let flip = below.is_member() && above.is_non_member();
    let mut t = Tally::default();
    for f in suites::PERIODIC_MATRIX {
        let g = catalog(f);
        for phi in suites::PERIODIC_PHASES {
            for s in suites::PERIODIC_ORDERS {
                let v = periodic::fractional_membership(&g, phi, s)?;
                t.add(
                    format!("{f}/phi{phi:.3}/s{s}"),
                    periodic::boundary_characterization(&g, phi, s),
                    &v,
                );
            }
        }
    }
    Ok((
        flip && t.ok(),
        format!("flip {flip}; matrix {}", t.summary()),
    ))
}

fn interpolation_constants() -> Outcome {
    let c = interpolation::semigroup_constant(1, 0.5)?;
    let b = interpolation::resolvent_constant(1, 0.5)?;
    let mut agree = 0;
    let mut bad = Vec::new();
    for k in 1..=3u32 {
        for th in [0.2, 0.4, 0.5, 0.6, 0.8] {
            for eps in [0.05, -0.05] {
                let pair = InterpolationPair::new(k, th)?;
                let x = suites::power_vector(2048, 0.5 + k as f64 * th + eps)?;
                let cmp = interpolation::compare(&x, &pair, &Method::ALL)?;
                let want = Prediction::from_bool(eps > 0.0);
                let all =
                    std::iter::once(&cmp.direct).chain(cmp.results.iter().map(|r| &r.verdict));
                if all.clone().all(|v| want.agrees_with(v) == Some(true)) {
                    agree += 1;
                } else {
                    bad.push(format!("k{k}/theta{th}/eps{eps:+}"));
                }
            }
        }
    }
    let ok = (c - 2.0 * LN_2).abs() < 1e-6 && (b - 1.0).abs() < 1e-8 && bad.is_empty();
    Ok((
        ok,
        format!(
            "C = {c:.9} (2 ln 2 = {:.9}), B = {b:.10}; stress {agree}/30 agree{}",
            2.0 * LN_2,
            if bad.is_empty() {
                String::new()
            } else {
                format!(", failing: {}", bad.join(" "))
            }
        ),
    ))
}

fn halfline_consistency() -> Outcome {
    let dir = HalflineOperator::new(PI)?;
    let bes = BesselOperator::new(0.5)?;
    let mut cross: f64 = 0.0;
    for f in suites::BUMPS {
        let g = catalog(f);
        for s in [0.0, 0.5, 1.0] {
            let a = halfline::fractional_norm(&dir, &g, s)?
                .norm_estimate
                .unwrap_or(f64::NAN);
            let b = halfline::fractional_norm(&bes, &g, s)?
                .norm_estimate
                .unwrap_or(f64::NAN);
            cross = cross.max(((a - b) / a).abs());
        }
    }
    let mut parseval: f64 = 0.0;
    let mut t = Tally::default();
    for (label, op) in suites::halfline_operators()? {
        for f in suites::HALFLINE_MATRIX {
            let g = catalog(f);
            let p = halfline::profile(op.as_ref(), &g)?;
            if f.starts_with("bump") {
                let got = p.membership(0.0).norm_estimate.unwrap_or(f64::NAN).powi(2);
                parseval = parseval.max((got / p.l2_sq - 1.0).abs());
            }
            for s in suites::HALFLINE_ORDERS {
                t.add(
                    format!("{label}/{f}/s{s}"),
                    halfline::sobolev_domain_predicate(op.as_ref(), &g, s),
                    &p.membership(s),
                );
            }
        }
    }
    Ok((
        cross < 1e-3 && parseval < 1e-4 && t.ok(),
        format!(
            "gamma 1/2 vs alpha pi {cross:.2e}, Parseval {parseval:.2e}; matrix {}",
            t.summary()
        ),
    ))
}

fn strict_inclusion() -> Outcome {
    let policy = DivergencePolicy::default();
    let n = policy.max_checkpoint();
    let weighted = |lambda: fn(f64) -> f64, weight: fn(f64) -> f64| {
        SpectralMeasure::discrete(
            (1..=n)
                .map(|k| Atom {
                    lambda: lambda(k as f64),
                    weight: weight(k as f64),
                })
                .collect(),
        )
    };
    let unbounded = [
        ("n", SpectralMeasure::lattice(n, |k| k as f64)?),
        ("n^2", SpectralMeasure::lattice(n, |k| (k * k) as f64)?),
        (
            "sqrt n",
            SpectralMeasure::lattice(n, |k| (k as f64).sqrt())?,
        ),
        (
            "3n+1/2 weighted 1/n",
            weighted(|k| 3.0 * k + 0.5, |k| 1.0 / k)?,
        ),
        ("n^1.5 weighted 2", weighted(|k| k.powf(1.5), |_| 2.0)?),
    ];
    let mut built = 0;
    let mut bad = Vec::new();
    for (name, mu) in unbounded {
        match spectral::strict_inclusion_witness(Arc::new(mu), 0.5, 1.5, &policy) {
            Ok(_) => built += 1,
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    let bounded = SpectralMeasure::lattice(n, |k| 2.0 - 1.0 / k as f64)?;
    let refused = matches!(
        spectral::strict_inclusion_witness(Arc::new(bounded), 0.5, 1.5, &policy),
        Err(ldspec::Error::OperatorBounded(_))
    );
    Ok((
        bad.is_empty() && refused,
        format!(
            "witnesses {built}/5, bounded measure refused {refused}{}",
            if bad.is_empty() {
                String::new()
            } else {
                format!("; {}", bad.join("; "))
            }
        ),
    ))
}

fn trace_ideal() -> Outcome {
    let a = hermite::resolvent_trace_membership(1.1);
    let b = hermite::resolvent_trace_membership(1.0);
    Ok((
        a.is_member() && b.is_non_member(),
        format!("p = 1.1 {:?}, p = 1.0 {:?}", a.status, b.status),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Hermite orthonormality", orthonormality),
        ("left-definite two-way identity", two_way_identity),
        ("Mehler formula", mehler),
        ("oscillator domains", oscillator_domains),
        ("form inequality", form_inequality),
        ("periodic threshold", periodic_threshold),
        ("interpolation constants", interpolation_constants),
        ("half-line and Bessel consistency", halfline_consistency),
        ("strict inclusion", strict_inclusion),
        ("trace-ideal tail", trace_ideal),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += usize::from(!ok);
        println!(
            "criterion {:>2} {} {name}: {detail} ({:.1}s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
