use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use super::sample::{sample_with, SampleBox};
use super::space::{invariant_form_space, preserves, InvariantFormSpace};
use crate::bieberbach::{verify_flat_manifold_with, FlatManifoldPresentation, GroupOptions, HolonomyData};
use crate::constructions::mapping_torus;
use crate::error::{Error, Result};
use crate::exactnum::rational::{format_rational, ExactRational};
use crate::exactnum::symbols::hilbert_nonzero;
use crate::exactnum::{Place, SquarefreeInt};
use crate::exec::ExecMode;
use crate::qform::{projectively_equivalent, realization_test, ProjectiveFingerprint, QuadForm};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub sample_box: SampleBox,
    pub exec: ExecMode,
    /// Also sample with seed + 1 and compare the class fingerprints.
    pub resample: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            samples: 200,
            seed: 1,
            sample_box: SampleBox::default(),
            exec: ExecMode::default(),
            resample: true,
        }
    }
}

fn ser_prime_map<S: Serializer>(m: &BTreeMap<BigInt, i8>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut out = s.serialize_map(Some(m.len()))?;
    for (p, e) in m {
        out.serialize_entry(&p.to_string(), e)?;
    }
    out.end()
}

fn ser_opt_prime_map<S: Serializer>(m: &Option<BTreeMap<BigInt, i8>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match m {
        Some(m) => ser_prime_map(m, s),
        None => s.serialize_none(),
    }
}

fn ser_diagonal<S: Serializer>(f: &QuadForm, s: S) -> std::result::Result<S::Ok, S::Error> {
    f.diagonalize().iter().map(format_rational).collect::<Vec<_>>().serialize(s)
}

/// (d, (-1)^((n-1)/2))_p eps_p for a form of odd dimension n.
pub fn twisted_eps(f: &QuadForm, p: &BigInt) -> Result<i8> {
    let n = f.dim();
    if n.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!("twisted eps needs odd dimension, got {n}")));
    }
    let fp = f.fingerprint()?;
    let sign = ExactRational::from_integer(BigInt::from(if ((n - 1) / 2).is_multiple_of(2) { 1 } else { -1 }));
    Ok(hilbert_nonzero(&fp.disc.to_rational(), &sign, &Place::Prime(p.clone())) * fp.eps(p))
}

/// One projective class among the samples.
#[derive(Debug, Clone, Serialize)]
pub struct ClassEntry {
    pub count: usize,
    #[serde(rename = "diagonal", serialize_with = "ser_diagonal")]
    pub representative: QuadForm,
    pub disc: SquarefreeInt,
    #[serde(serialize_with = "ser_prime_map")]
    pub eps: BTreeMap<BigInt, i8>,
    #[serde(serialize_with = "ser_opt_prime_map", skip_serializing_if = "Option::is_none")]
    pub twisted_eps: Option<BTreeMap<BigInt, i8>>,
    pub projective: ProjectiveFingerprint,
}

impl ClassEntry {
    fn new(representative: QuadForm, projective: ProjectiveFingerprint) -> Result<Self> {
        let fp = representative.fingerprint()?;
        let primes = fp.prime_set().primes().to_vec();
        let eps = primes.iter().map(|p| (p.clone(), fp.eps(p))).collect();
        let twisted_eps = if representative.dim() % 2 == 1 {
            Some(
                primes
                    .iter()
                    .map(|p| Ok((p.clone(), twisted_eps(&representative, p)?)))
                    .collect::<Result<_>>()?,
            )
        } else {
            None
        };
        Ok(ClassEntry { count: 1, disc: fp.disc.clone(), eps, twisted_eps, representative, projective })
    }

    pub fn eps_at(&self, p: u64) -> i8 {
        self.representative.fingerprint().map_or(1, |fp| fp.eps(&BigInt::from(p)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResampleCheck {
    pub seed: u64,
    pub classes: usize,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizationMatch {
    pub form: String,
    pub matches: bool,
}

/// Projective classes observed among sampled holonomy forms.
#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub schema_version: u32,
    pub family: String,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub holonomy: HolonomyData,
    pub invariant_space_dim: usize,
    pub classes: Vec<ClassEntry>,
    pub ucc_candidate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resample: Option<ResampleCheck>,
    pub realization_matches: Vec<RealizationMatch>,
}

impl ClassReport {
    /// Runs `ucc_verdict` and records the outcome under `label`.
    pub fn record_realization(&mut self, label: impl Into<String>, target_form: &QuadForm) -> Result<bool> {
        let matches = ucc_verdict(self, target_form)?;
        self.realization_matches.push(RealizationMatch { form: label.into(), matches });
        Ok(matches)
    }
}

fn bucket(samples: Vec<super::sample::Sample>) -> Result<Vec<ClassEntry>> {
    let mut classes: Vec<ClassEntry> = Vec::new();
    for s in samples {
        let mut hit = None;
        for (i, c) in classes.iter().enumerate() {
            if projectively_equivalent(&c.representative, &s.form)? {
                hit = Some(i);
                break;
            }
        }
        match hit {
            Some(i) => classes[i].count += 1,
            None => classes.push(ClassEntry::new(s.form, s.fingerprint)?),
        }
    }
    Ok(classes)
}

fn classes_for(
    p: &FlatManifoldPresentation,
    space: &InvariantFormSpace,
    seed: u64,
    opts: &ClassifyOptions,
) -> Result<Vec<ClassEntry>> {
    let samples = sample_with(space, opts.samples, seed, opts.sample_box, opts.exec)?;
    for s in &samples {
        for g in &p.generators {
            if !preserves(g.linear(), s.form.gram()) {
                return Err(Error::Assertion(format!("sample {} is not invariant", s.index)));
            }
        }
    }
    bucket(samples)
}

/// Verifies `p`, then classifies `opts.samples` sampled holonomy forms.
pub fn enumerate_classes(p: &FlatManifoldPresentation, samples: usize, seed: u64) -> Result<ClassReport> {
    enumerate_classes_with(p, &ClassifyOptions { samples, seed, ..ClassifyOptions::default() })
}

pub fn enumerate_classes_with(p: &FlatManifoldPresentation, opts: &ClassifyOptions) -> Result<ClassReport> {
    let h = verify_flat_manifold_with(p, &GroupOptions { exec: opts.exec, ..GroupOptions::default() })?;
    classify_verified(p, h, opts)
}

/// As `enumerate_classes_with`, for a presentation already verified.
pub fn classify_verified(p: &FlatManifoldPresentation, h: HolonomyData, opts: &ClassifyOptions) -> Result<ClassReport> {
    let space = invariant_form_space(p, &h)?;
    let classes = classes_for(p, &space, opts.seed, opts)?;
    let resample = if opts.resample {
        let seed = opts.seed.wrapping_add(1);
        let other = classes_for(p, &space, seed, opts)?;
        let a: BTreeSet<String> = classes.iter().map(|c| format!("{:?}", c.projective)).collect();
        let b: BTreeSet<String> = other.iter().map(|c| format!("{:?}", c.projective)).collect();
        Some(ResampleCheck { seed, classes: other.len(), stable: a == b })
    } else {
        None
    };
    Ok(ClassReport {
        schema_version: SCHEMA_VERSION,
        family: p.label.clone(),
        dim: p.dim,
        samples: opts.samples,
        seed: opts.seed,
        holonomy: h,
        invariant_space_dim: space.basis.len(),
        ucc_candidate: classes.len() == 1,
        classes,
        resample,
        realization_matches: Vec::new(),
    })
}

/// True iff a single class was observed and it is realized by `target_form`
/// (signature (n+1, 1)).
pub fn ucc_verdict(report: &ClassReport, target_form: &QuadForm) -> Result<bool> {
    match report.classes.as_slice() {
        [only] => realization_test(&only.representative, target_form),
        _ => Ok(false),
    }
}

/// p x_1^2 + x_2^2 + ... + x_{n+1}^2 - x_{n+2}^2.
pub fn target_form_single(p: i64, n: usize) -> Result<QuadForm> {
    let mut d = vec![1i64; n + 2];
    d[0] = p;
    d[n + 1] = -1;
    QuadForm::from_ints(&d)
}

/// p x_1^2 + p x_2^2 + x_3^2 + ... + x_{n+1}^2 - x_{n+2}^2.
pub fn target_form_double(p: i64, n: usize) -> Result<QuadForm> {
    let mut d = vec![1i64; n + 2];
    d[0] = p;
    d[1] = p;
    d[n + 1] = -1;
    QuadForm::from_ints(&d)
}

/// Human-readable label of a diagonal integer form.
pub fn diagonal_label(f: &QuadForm) -> String {
    let n = f.dim();
    let mut out = String::new();
    for (i, a) in f.diagonalize().iter().enumerate() {
        let a = format_rational(a);
        let (sign, mag) = match a.strip_prefix('-') {
            Some(m) => ("-", m.to_string()),
            None => (if i == 0 { "" } else { "+" }, a),
        };
        let coef = if mag == "1" { String::new() } else { mag };
        if n > 6 && i == 3 && i + 2 < n {
            out.push_str("+...");
        }
        if n > 6 && i >= 3 && i + 2 < n {
            continue;
        }
        out.push_str(&format!("{sign}{coef}x{}^2", i + 1));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairVerdict {
    Disjoint,
    Overlapping,
    Inconclusive,
}

impl fmt::Display for PairVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairVerdict::Disjoint => "disjoint",
            PairVerdict::Overlapping => "overlapping",
            PairVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub schema_version: u32,
    pub first: String,
    pub second: String,
    pub dim: usize,
    pub verdict: PairVerdict,
    /// The exact invariant that separates the two class sets, if any.
    pub separator: Option<String>,
    pub first_fingerprints: Vec<ProjectiveFingerprint>,
    pub second_fingerprints: Vec<ProjectiveFingerprint>,
}

fn constant<T: Clone + PartialEq>(mut it: impl Iterator<Item = T>) -> Option<T> {
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}

fn primes_of(fp: &ProjectiveFingerprint) -> &[BigInt] {
    match fp {
        ProjectiveFingerprint::ZeroMod4 { primes, .. }
        | ProjectiveFingerprint::OneMod4 { primes, .. }
        | ProjectiveFingerprint::TwoMod4 { primes, .. }
        | ProjectiveFingerprint::ThreeMod4 { primes, .. } => primes,
    }
}

fn sign(v: i8) -> &'static str {
    if v < 0 {
        "-1"
    } else {
        "+1"
    }
}

// A projective invariant constant on each side with different values.
fn separator(r1: &ClassReport, r2: &ClassReport) -> Option<String> {
    let n = r1.dim;
    let even = n.is_multiple_of(2);
    if even {
        let d1 = constant(r1.classes.iter().map(|c| c.disc.clone()))?;
        let d2 = constant(r2.classes.iter().map(|c| c.disc.clone()))?;
        if d1 != d2 {
            return Some(format!("disc {d1} vs {d2}"));
        }
    }
    let all: BTreeSet<BigInt> = r1
        .classes
        .iter()
        .chain(&r2.classes)
        .flat_map(|c| primes_of(&c.projective).iter().cloned())
        .chain(std::iter::once(BigInt::from(2)))
        .collect();
    let name = match n % 4 {
        3 => "twisted eps",
        _ => "eps",
    };
    for p in &all {
        let value = |r: &ClassReport| {
            constant(r.classes.iter().map(|c| if primes_of(&c.projective).contains(p) { -1i8 } else { 1 }))
        };
        if let (Some(a), Some(b)) = (value(r1), value(r2)) {
            if a != b {
                return Some(format!("{name}_{p} {} vs {}", sign(a), sign(b)));
            }
        }
    }
    None
}

/// Compares the class sets of two reports of the same dimension.
pub fn pair_verdict(r1: &ClassReport, r2: &ClassReport) -> Result<PairReport> {
    if r1.dim != r2.dim {
        return Err(Error::DimensionMismatch(r1.dim, r2.dim));
    }
    let mut overlap = false;
    'outer: for a in &r1.classes {
        for b in &r2.classes {
            if projectively_equivalent(&a.representative, &b.representative)? {
                overlap = true;
                break 'outer;
            }
        }
    }
    let nonempty = !r1.classes.is_empty() && !r2.classes.is_empty();
    let sep = if overlap || !nonempty { None } else { separator(r1, r2) };
    let verdict = if overlap {
        PairVerdict::Overlapping
    } else if sep.is_some() {
        PairVerdict::Disjoint
    } else {
        PairVerdict::Inconclusive
    };
    Ok(PairReport {
        schema_version: SCHEMA_VERSION,
        first: r1.family.clone(),
        second: r2.family.clone(),
        dim: r1.dim,
        verdict,
        separator: sep,
        first_fingerprints: r1.classes.iter().map(|c| c.projective.clone()).collect(),
        second_fingerprints: r2.classes.iter().map(|c| c.projective.clone()).collect(),
    })
}

/// The twisted eps at 2 of every sampled holonomy form of the mapping torus,
/// which must be constant.
pub fn mapping_torus_fingerprint(k: usize, l: usize, samples: usize, seed: u64) -> Result<i8> {
    let p = mapping_torus(k, l)?;
    let h = verify_flat_manifold_with(&p, &GroupOptions::default())?;
    let space = invariant_form_space(&p, &h)?;
    let forms = sample_with(&space, samples, seed, SampleBox::default(), ExecMode::default())?;
    let two = BigInt::from(2);
    let values: Vec<i8> = forms.iter().map(|s| twisted_eps(&s.form, &two)).collect::<Result<_>>()?;
    constant(values.into_iter())
        .ok_or_else(|| Error::Assertion(format!("twisted eps_2 of mt:k={k},l={l} is not constant")))
}
