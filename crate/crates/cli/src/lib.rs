//! Command implementations behind the `flatcusp` binary.

use std::fmt::Write as _;
use std::str::FromStr;

use flatcusp::bieberbach::{verify_flat_manifold, HolonomyData};
use flatcusp::classify::{
    diagonal_label, enumerate_classes_with, pair_verdict, target_form_double, target_form_single, ClassReport,
    ClassifyOptions, PairReport,
};
use flatcusp::constructions::FamilySpec;
use flatcusp::qform::QuadForm;
use flatcusp::Error;
use serde::Serialize;
use serde_json::json;

pub mod selftest;
pub mod table;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

/// Options shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Sample count; when unset, 200, or 50 from dimension 32 on.
    pub samples: Option<usize>,
    pub seed: u64,
    pub format: Format,
    pub max_dim: usize,
    pub long_running: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { samples: None, seed: 1, format: Format::Json, max_dim: 40, long_running: false }
    }
}

impl RunConfig {
    pub fn samples_for(&self, dim: usize) -> usize {
        self.samples.unwrap_or(if dim >= 32 { 50 } else { 200 })
    }

    fn classify_options(&self, dim: usize) -> ClassifyOptions {
        ClassifyOptions { samples: self.samples_for(dim), seed: self.seed, ..ClassifyOptions::default() }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{spec} has dimension {dim} above the guard {max}; pass --long-running or raise --max-dim")]
    Guard { spec: String, dim: usize, max: usize },
    #[error("{0}")]
    Failed(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Guard { .. } => 3,
            CliError::Failed(Error::Parse(_) | Error::InvalidParameters(_)) => 2,
            CliError::Failed(Error::GroupTooLarge(_)) => 3,
            CliError::Failed(_) => 1,
        }
    }
}

/// Rendered output of a command and whether its checks passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub output: String,
    pub summary: Option<String>,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

pub fn parse_spec(s: &str) -> Result<FamilySpec, CliError> {
    FamilySpec::from_str(s).map_err(|e| CliError::Input(e.to_string()))
}

pub fn check_guard(spec: &FamilySpec, cfg: &RunConfig) -> Result<(), CliError> {
    let dim = spec.dim();
    if dim > cfg.max_dim && !cfg.long_running {
        return Err(CliError::Guard { spec: spec.to_string(), dim, max: cfg.max_dim });
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn holonomy_summary(spec: &FamilySpec, dim: usize, h: &HolonomyData) -> String {
    format!(
        "{spec}: dim {dim}, holonomy order {}, b1 {}, {}",
        h.order,
        h.b1,
        if h.orientable { "orientable" } else { "non-orientable" }
    )
}

pub fn cmd_build(spec: &str, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = parse_spec(spec)?;
    check_guard(&spec, cfg)?;
    let p = spec.build()?;
    let h = verify_flat_manifold(&p)?;
    let summary = holonomy_summary(&spec, p.dim, &h);
    let output = match cfg.format {
        Format::Json => to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "family": spec,
            "dim": p.dim,
            "holonomy": h,
            "presentation": p,
        })),
        Format::Table => format!("{summary}\ngroup order {}\n", h.group_order),
    };
    let summary = (cfg.format == Format::Json).then_some(summary);
    Ok(Outcome { output, summary, passed: true })
}

/// Signature (n+1, 1) forms expected to realize a family, with labels.
pub fn target_forms(spec: &FamilySpec) -> Result<Vec<(String, QuadForm)>, Error> {
    let n = spec.dim();
    let form = match spec {
        FamilySpec::WtC3(_) if n % 8 == 2 => target_form_single(3, n)?,
        FamilySpec::WtC3(_) if n % 8 == 6 => {
            let mut d = vec![1i64; n + 2];
            d[..3].fill(3);
            d[n + 1] = -1;
            QuadForm::from_ints(&d)?
        }
        FamilySpec::Ep(_) => target_form_double(3, n)?,
        _ => return Ok(Vec::new()),
    };
    Ok(vec![(diagonal_label(&form), form)])
}

/// Families known to have a unique holonomy form up to scaling.
pub fn claimed_ucc(spec: &FamilySpec) -> bool {
    match spec {
        FamilySpec::Torus(1) | FamilySpec::C(_) | FamilySpec::E(_) | FamilySpec::F(..) | FamilySpec::Ep(_) => true,
        FamilySpec::WtC3(_) => spec.dim() % 4 == 2,
        FamilySpec::Product(parts) => {
            matches!(parts.as_slice(), [FamilySpec::Torus(1), FamilySpec::E(_)] | [FamilySpec::E(_), FamilySpec::Torus(1)])
        }
        _ => false,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Classifies and checks the known claims for the family, if any.
pub fn classify_checked(spec: &FamilySpec, cfg: &RunConfig) -> Result<(ClassReport, Vec<Check>), CliError> {
    check_guard(spec, cfg)?;
    let p = spec.build()?;
    let mut report = enumerate_classes_with(&p, &cfg.classify_options(p.dim))?;
    let mut checks = Vec::new();
    if claimed_ucc(spec) {
        checks.push(Check { name: "single class".into(), passed: report.ucc_candidate });
        if let Some(r) = &report.resample {
            checks.push(Check { name: format!("same classes with seed {}", r.seed), passed: r.stable });
        }
    }
    for (label, form) in target_forms(spec)? {
        let ok = report.record_realization(label.clone(), &form)?;
        checks.push(Check { name: format!("realized by {label}"), passed: ok });
    }
    Ok((report, checks))
}

fn class_table(report: &ClassReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{}: dim {}, {} samples (seed {}), invariant space dim {}, {} class(es)",
        report.family,
        report.dim,
        report.samples,
        report.seed,
        report.invariant_space_dim,
        report.classes.len()
    );
    for (i, c) in report.classes.iter().enumerate() {
        let minus: Vec<String> = c.eps.iter().filter(|(_, &e)| e < 0).map(|(p, _)| p.to_string()).collect();
        let _ = writeln!(s, "  class {i}: {} samples, disc {}, eps -1 at [{}]", c.count, c.disc, minus.join(", "));
    }
    s
}

pub fn cmd_classify(spec: &str, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = parse_spec(spec)?;
    let (report, checks) = classify_checked(&spec, cfg)?;
    let passed = checks.iter().all(|c| c.passed);
    let output = match cfg.format {
        Format::Json => {
            let mut v = serde_json::to_value(&report).expect("report serializes");
            v["checks"] = serde_json::to_value(&checks).expect("checks serialize");
            to_json(&v)
        }
        Format::Table => {
            let mut s = class_table(&report);
            for c in &checks {
                let _ = writeln!(s, "  {}: {}", c.name, if c.passed { "PASS" } else { "FAIL" });
            }
            s
        }
    };
    Ok(Outcome { output, summary: None, passed })
}

pub fn pair_reports(a: &FamilySpec, b: &FamilySpec, cfg: &RunConfig) -> Result<PairReport, CliError> {
    if a.dim() != b.dim() {
        return Err(CliError::Input(format!("{a} has dimension {}, {b} has {}", a.dim(), b.dim())));
    }
    check_guard(a, cfg)?;
    check_guard(b, cfg)?;
    let r1 = enumerate_classes_with(&a.build()?, &cfg.classify_options(a.dim()))?;
    let r2 = enumerate_classes_with(&b.build()?, &cfg.classify_options(b.dim()))?;
    Ok(pair_verdict(&r1, &r2)?)
}

pub fn cmd_pair(first: &str, second: &str, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (a, b) = (parse_spec(first)?, parse_spec(second)?);
    let report = pair_reports(&a, &b, cfg)?;
    let output = match cfg.format {
        Format::Json => to_json(&report),
        Format::Table => format!(
            "{} vs {} (dim {}): {}{}\n",
            report.first,
            report.second,
            report.dim,
            report.verdict,
            report.separator.as_ref().map(|s| format!(" via {s}")).unwrap_or_default()
        ),
    };
    Ok(Outcome { output, summary: None, passed: true })
}
