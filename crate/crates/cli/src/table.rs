//! Reproduction of the two summary tables at their smallest instances.

use std::fmt::Write as _;

use flatcusp::classify::PairVerdict;
use flatcusp::constructions::FamilySpec;
use serde::Serialize;

use crate::{classify_checked, pair_reports, parse_spec, CliError, Format, Outcome, RunConfig, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableKind {
    Ucc,
    Pairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub dimensions: &'static str,
    pub instance_dim: usize,
    pub orientable: bool,
    pub construction: String,
    pub status: Status,
    pub note: String,
}

struct UccRow {
    dimensions: &'static str,
    orientable: bool,
    spec: &'static str,
    long_running: bool,
}

struct PairRow {
    dimensions: &'static str,
    orientable: bool,
    specs: (&'static str, &'static str),
    long_running: bool,
}

const UCC_ROWS: &[UccRow] = &[
    UccRow { dimensions: "1", orientable: true, spec: "S1", long_running: false },
    UccRow { dimensions: "6", orientable: false, spec: "C:k=3", long_running: false },
    UccRow { dimensions: "n>=10, n=2 mod 4", orientable: true, spec: "wtC3:0", long_running: false },
    UccRow { dimensions: "n>=10, n=2 mod 4", orientable: true, spec: "C:k=5", long_running: false },
    UccRow { dimensions: "n>=12, n=0 mod 4", orientable: true, spec: "E:k=3", long_running: false },
    UccRow { dimensions: "n>=13, n=1 mod 4", orientable: true, spec: "product(S1, E:k=3)", long_running: false },
    UccRow { dimensions: "n>=35, n=3 mod 4", orientable: true, spec: "F:k=0,l=0", long_running: true },
];

const PAIR_ROWS: &[PairRow] = &[
    PairRow { dimensions: "n>=10, n=2 mod 4", orientable: true, specs: ("wtC3:0", "C:k=5"), long_running: false },
    PairRow { dimensions: "13", orientable: true, specs: ("mt:k=2,l=0", "product(S1, E:k=3)"), long_running: false },
    PairRow { dimensions: "16", orientable: false, specs: ("product(C:k=3, wtC3:0)", "C:k=8"), long_running: false },
    PairRow {
        dimensions: "19",
        orientable: true,
        specs: ("mt:k=3,l=0", "product(mt:k=1,l=0, E:k=3)"),
        long_running: false,
    },
    PairRow { dimensions: "n>=20, n=0 mod 4", orientable: true, specs: ("product(C:k=5, wtC3:0)", "C:k=10"), long_running: false },
    PairRow { dimensions: "n>=21, n=1 mod 4", orientable: true, specs: ("mt:k=2,l=1", "product(S1, E:k=5)"), long_running: false },
    PairRow {
        dimensions: "n>=27, n=3 mod 4",
        orientable: true,
        specs: ("mt:k=3,l=1", "product(mt:k=1,l=0, E:k=5)"),
        long_running: true,
    },
];

pub const FOOTER: &str = "Each row is checked at one finite instance. The infinite families of each row, \
and the existence of arbitrarily many UCC classes, are not reproduced here; beyond these instances they rest \
on the invariant suites (selftest) and the closed-form laws checked in the test suite.";

fn skip_reason(dim: usize, long_running: bool, cfg: &RunConfig) -> Option<String> {
    if long_running && !cfg.long_running {
        return Some("long-running; rerun with --long-running".into());
    }
    if dim > cfg.max_dim && !cfg.long_running {
        return Some(format!("dimension {dim} above --max-dim {}", cfg.max_dim));
    }
    None
}

fn ucc_row(row: &UccRow, cfg: &RunConfig) -> Result<Row, CliError> {
    let spec = parse_spec(row.spec)?;
    let dim = spec.dim();
    let mut out = Row {
        dimensions: row.dimensions,
        instance_dim: dim,
        orientable: row.orientable,
        construction: spec.to_string(),
        status: Status::Skipped,
        note: String::new(),
    };
    if let Some(why) = skip_reason(dim, row.long_running, cfg) {
        out.note = why;
        return Ok(out);
    }
    let run = RunConfig { long_running: true, ..cfg.clone() };
    let (report, mut checks) = classify_checked(&spec, &run)?;
    checks.push(crate::Check {
        name: "orientability".into(),
        passed: report.holonomy.orientable == row.orientable,
    });
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    out.status = if failed.is_empty() { Status::Pass } else { Status::Fail };
    out.note = if failed.is_empty() {
        format!("1 class in {} samples, disc {}", report.samples, report.classes[0].disc)
    } else {
        format!("failed: {}; {} classes", failed.join(", "), report.classes.len())
    };
    Ok(out)
}

fn pair_row(row: &PairRow, cfg: &RunConfig) -> Result<Row, CliError> {
    let (a, b): (FamilySpec, FamilySpec) = (parse_spec(row.specs.0)?, parse_spec(row.specs.1)?);
    let dim = a.dim();
    let mut out = Row {
        dimensions: row.dimensions,
        instance_dim: dim,
        orientable: row.orientable,
        construction: format!("{a} / {b}"),
        status: Status::Skipped,
        note: String::new(),
    };
    if let Some(why) = skip_reason(dim, row.long_running, cfg) {
        out.note = why;
        return Ok(out);
    }
    let run = RunConfig { long_running: true, ..cfg.clone() };
    let report = pair_reports(&a, &b, &run)?;
    let both_orientable = [&a, &b]
        .iter()
        .map(|s| s.build().and_then(|p| flatcusp::bieberbach::verify_flat_manifold(&p)).map(|h| h.orientable))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .all(|o| o);
    let ok = report.verdict == PairVerdict::Disjoint && both_orientable == row.orientable;
    out.status = if ok { Status::Pass } else { Status::Fail };
    out.note = match &report.separator {
        Some(s) => format!("{} via {s}", report.verdict),
        None => report.verdict.to_string(),
    };
    if both_orientable != row.orientable {
        out.note.push_str("; orientability differs");
    }
    Ok(out)
}

pub fn table_rows(which: TableKind, cfg: &RunConfig) -> Result<Vec<Row>, CliError> {
    match which {
        TableKind::Ucc => UCC_ROWS.iter().map(|r| ucc_row(r, cfg)).collect(),
        TableKind::Pairs => PAIR_ROWS.iter().map(|r| pair_row(r, cfg)).collect(),
    }
}

pub fn cmd_table(which: TableKind, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rows = table_rows(which, cfg)?;
    let passed = rows.iter().all(|r| r.status != Status::Fail);
    let name = match which {
        TableKind::Ucc => "ucc",
        TableKind::Pairs => "pairs",
    };
    let output = match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "table": name,
                "seed": cfg.seed,
                "rows": rows,
                "footer": FOOTER,
            }))
            .expect("table serializes");
            s.push('\n');
            s
        }
        Format::Table => render(&rows),
    };
    Ok(Outcome { output, summary: None, passed })
}

fn render(rows: &[Row]) -> String {
    let mut s = String::new();
    let w = rows.iter().map(|r| r.construction.len()).max().unwrap_or(0).max(12);
    let _ = writeln!(s, "{:<18} {:>3} {:<4} {:<w$} {:<8} note", "dimensions", "n", "or.", "construction", "status");
    for r in rows {
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        };
        let _ = writeln!(
            s,
            "{:<18} {:>3} {:<4} {:<w$} {:<8} {}",
            r.dimensions,
            r.instance_dim,
            if r.orientable { "Y" } else { "N" },
            r.construction,
            status,
            r.note
        );
    }
    let _ = writeln!(s, "\n{FOOTER}");
    s
}
