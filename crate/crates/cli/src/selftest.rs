//! Randomized property suites for the arithmetic layer.

use std::fmt::Write as _;

use flatcusp::exactnum::{hilbert_symbol, ExactRational, Place, PrimeSet};
use flatcusp::qform::{direct_sum, discriminant, hasse_witt, projectively_equivalent, rationally_equivalent, QuadForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{CliError, Format, Outcome, RunConfig, SCHEMA_VERSION};

/// Hilbert symbol implementation under test.
pub type HilbertFn = fn(&ExactRational, &ExactRational, &Place) -> flatcusp::Result<i8>;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    let v = rng.gen_range(1..=bound);
    if rng.gen() {
        v
    } else {
        -v
    }
}

fn rational(rng: &mut ChaCha8Rng, positive: bool) -> ExactRational {
    let n = if positive { rng.gen_range(1..=40) } else { nonzero(rng, 40) };
    ExactRational::new(n.into(), rng.gen_range(1..=6i64).into())
}

fn diagonal(rng: &mut ChaCha8Rng, n: usize, positive: bool) -> QuadForm {
    let d: Vec<ExactRational> = (0..n).map(|_| rational(rng, positive)).collect();
    QuadForm::diagonal_form(&d).expect("nonzero entries")
}

/// Product over all places of (a, b)_v is 1.
pub fn product_formula(rng: &mut ChaCha8Rng, cases: usize, hilbert: HilbertFn) -> flatcusp::Result<SuiteResult> {
    let mut failures = 0;
    for _ in 0..cases {
        let a = ExactRational::from_integer(nonzero(rng, 5000).into());
        let b = ExactRational::from_integer(nonzero(rng, 5000).into());
        let set = PrimeSet::of_rationals([&a, &b])?;
        let mut prod = 1i8;
        for place in set.places() {
            prod *= hilbert(&a, &b, &place)?;
        }
        failures += usize::from(prod != 1);
    }
    Ok(SuiteResult { name: "product formula", cases, failures })
}

/// eps_p(f + g) = eps_p(f) eps_p(g) (d(f), d(g))_p.
pub fn sum_of_forms(rng: &mut ChaCha8Rng, cases: usize, hilbert: HilbertFn) -> flatcusp::Result<SuiteResult> {
    let mut failures = 0;
    for _ in 0..cases {
        let (m, k) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let (f, g) = (diagonal(rng, m, false), diagonal(rng, k, false));
        let s = direct_sum(&f, &g);
        let (df, dg) = (discriminant(&f)?.to_rational(), discriminant(&g)?.to_rational());
        let mut ok = true;
        for place in s.fingerprint()?.prime_set().places() {
            let rhs = hasse_witt(&f, &place) * hasse_witt(&g, &place) * hilbert(&df, &dg, &place)?;
            ok &= hasse_witt(&s, &place) == rhs;
        }
        failures += usize::from(!ok);
    }
    Ok(SuiteResult { name: "sum of forms", cases, failures })
}

/// <m, -m> is equivalent to the hyperbolic plane.
pub fn footnote(ms: &[i64]) -> flatcusp::Result<SuiteResult> {
    let h = QuadForm::hyperbolic_plane();
    let mut failures = 0;
    for &m in ms {
        failures += usize::from(!rationally_equivalent(&QuadForm::from_ints(&[m, -m])?, &h)?);
    }
    Ok(SuiteResult { name: "<m,-m> ~ <1,-1>", cases: ms.len(), failures })
}

// Random unimodular change of basis.
fn shuffle(rng: &mut ChaCha8Rng, f: &QuadForm) -> flatcusp::Result<QuadForm> {
    let n = f.dim();
    let one = ExactRational::from_integer(1.into());
    let zero = ExactRational::from_integer(0.into());
    let mut c: Vec<Vec<ExactRational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { one.clone() } else { zero.clone() }).collect()).collect();
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let k = ExactRational::from_integer(rng.gen_range(-2..=2i64).into());
        for row in c.iter_mut() {
            let v = &row[j] * &k;
            row[i] += v;
        }
    }
    f.transform(&c)
}

/// Scaling search and fingerprint comparison agree on positive definite
/// pairs; half the pairs are projectively equivalent by construction.
pub fn decider_agreement(rng: &mut ChaCha8Rng, cases: usize) -> flatcusp::Result<SuiteResult> {
    let mut failures = 0;
    for i in 0..cases {
        let n = rng.gen_range(2..=8);
        let f = diagonal(rng, n, true);
        let related = i % 2 == 0;
        let g = if related {
            let m = rational(rng, true);
            shuffle(rng, &f.scaled(&m)?)?
        } else {
            diagonal(rng, n, true)
        };
        match projectively_equivalent(&f, &g) {
            Ok(eq) => failures += usize::from(related && !eq),
            Err(flatcusp::Error::DeciderDisagreement(_)) => failures += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(SuiteResult { name: "decider agreement", cases, failures })
}

pub fn run_suites(seed: u64, hilbert: HilbertFn) -> flatcusp::Result<Vec<SuiteResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(vec![
        product_formula(&mut rng, 1000, hilbert)?,
        sum_of_forms(&mut rng, 500, hilbert)?,
        footnote(&[2, 3, 5, 6, 7, 30])?,
        decider_agreement(&mut rng, 200)?,
    ])
}

pub fn cmd_selftest(cfg: &RunConfig) -> Result<Outcome, CliError> {
    selftest_with(cfg, hilbert_symbol)
}

pub fn selftest_with(cfg: &RunConfig, hilbert: HilbertFn) -> Result<Outcome, CliError> {
    let suites = run_suites(cfg.seed, hilbert)?;
    let passed = suites.iter().all(SuiteResult::passed);
    let output = match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "seed": cfg.seed,
                "suites": suites,
                "passed": passed,
            }))
            .expect("selftest serializes");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut s = String::new();
            for r in &suites {
                let status = if r.passed() { "pass" } else { "FAIL" };
                let _ = writeln!(s, "{:<20} {}/{} {status}", r.name, r.cases - r.failures, r.cases);
            }
            s
        }
    };
    Ok(Outcome { output, summary: None, passed })
}
