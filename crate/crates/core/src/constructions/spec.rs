use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::families::{
    build_c, build_c3_full, build_e, build_ep, build_f, build_wtc3, hantzsche_wendt, hw_extension, mapping_torus,
};
use crate::bieberbach::{product, FlatManifoldPresentation};
use crate::error::{Error, Result};

/// A named flat-manifold family with parameters, as written on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Hw,
    Torus(usize),
    HwExt(usize, usize, usize),
    C(usize),
    E(usize),
    ETilde(usize),
    WtC3(usize),
    C3(usize),
    F(usize, usize),
    Ep(usize),
    MappingTorus(usize, usize),
    Product(Vec<FamilySpec>),
}

impl FamilySpec {
    pub fn dim(&self) -> usize {
        match self {
            FamilySpec::Hw => 3,
            FamilySpec::Torus(n) => *n,
            FamilySpec::HwExt(a, b, c) => a + b + c,
            FamilySpec::C(k) => 2 * k,
            FamilySpec::E(k) | FamilySpec::ETilde(k) => 4 * k,
            FamilySpec::WtC3(m) | FamilySpec::C3(m) => 10 + m,
            FamilySpec::F(k, l) => 35 + 4 * (k + l),
            FamilySpec::Ep(k) => 32 + 4 * k,
            FamilySpec::MappingTorus(k, l) => 6 * k + 8 * l + 1,
            FamilySpec::Product(parts) => parts.iter().map(FamilySpec::dim).sum(),
        }
    }

    pub fn build(&self) -> Result<FlatManifoldPresentation> {
        let p = match self {
            FamilySpec::Hw => hantzsche_wendt(),
            FamilySpec::Torus(n) => FlatManifoldPresentation::torus(*n),
            FamilySpec::HwExt(a, b, c) => hw_extension(*a, *b, *c)?,
            FamilySpec::C(k) => build_c(*k)?,
            FamilySpec::E(k) => build_e(*k)?.base,
            FamilySpec::ETilde(k) => build_e(*k)?.cover(),
            FamilySpec::WtC3(m) => build_wtc3(*m)?,
            FamilySpec::C3(m) => build_c3_full(*m)?.base,
            FamilySpec::F(k, l) => build_f(*k, *l)?,
            FamilySpec::Ep(k) => build_ep(*k)?,
            FamilySpec::MappingTorus(k, l) => mapping_torus(*k, *l)?,
            FamilySpec::Product(parts) => {
                let mut it = parts.iter();
                let first = it.next().ok_or_else(|| Error::Parse("empty product".into()))?.build()?;
                it.try_fold(first, |acc, s| Ok::<_, Error>(product(&acc, &s.build()?)))?
            }
        };
        Ok(p.with_label(self.to_string()))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Hw => write!(f, "hw"),
            FamilySpec::Torus(1) => write!(f, "S1"),
            FamilySpec::Torus(n) => write!(f, "torus:{n}"),
            FamilySpec::HwExt(a, b, c) => write!(f, "hw_ext:{a},{b},{c}"),
            FamilySpec::C(k) => write!(f, "C:k={k}"),
            FamilySpec::E(k) => write!(f, "E:k={k}"),
            FamilySpec::ETilde(k) => write!(f, "E_tilde:k={k}"),
            FamilySpec::WtC3(m) => write!(f, "wtC3:{m}"),
            FamilySpec::C3(m) => write!(f, "C3:{m}"),
            FamilySpec::F(k, l) => write!(f, "F:k={k},l={l}"),
            FamilySpec::Ep(k) => write!(f, "Ep:k={k}"),
            FamilySpec::MappingTorus(k, l) => write!(f, "mt:k={k},l={l}"),
            FamilySpec::Product(parts) => {
                let inner: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "product({})", inner.join(", "))
            }
        }
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn parse_err(s: &str, why: &str) -> Error {
    Error::Parse(format!("{s:?}: {why}"))
}

fn number(s: &str, whole: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| parse_err(whole, "expected a nonnegative integer"))
}

/// "k=3,l=0" style parameters; a bare number is accepted for a single key.
fn keyed(body: &str, keys: &[&str], whole: &str) -> Result<Vec<usize>> {
    let mut out: Vec<Option<usize>> = vec![None; keys.len()];
    for (idx, part) in body.split(',').enumerate() {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, val) = match part.split_once('=') {
            Some((k, v)) => (k.trim(), v),
            None if keys.len() == 1 || idx < keys.len() => (keys[idx], part),
            None => return Err(parse_err(whole, "unexpected parameter")),
        };
        let pos = keys.iter().position(|k| *k == key).ok_or_else(|| parse_err(whole, "unknown parameter"))?;
        if out[pos].replace(number(val, whole)?).is_some() {
            return Err(parse_err(whole, "repeated parameter"));
        }
    }
    Ok(out.into_iter().map(|v| v.unwrap_or(0)).collect())
}

/// Splits on top-level commas.
fn split_top(s: &str) -> Result<Vec<&str>> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(parse_err(s, "unbalanced parentheses"));
                }
            }
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(parse_err(s, "unbalanced parentheses"));
    }
    out.push(&s[start..]);
    Ok(out)
}

/// Top-level factors of a product body. A bare "key=value" piece continues
/// the previous factor, so "mt:k=1,l=0, E:k=3" has two factors.
fn factors(body: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for piece in split_top(body)? {
        let t = piece.trim();
        let continues = !t.contains(':') && !t.contains('(') && t.contains('=');
        match out.last_mut() {
            Some(prev) if continues => {
                prev.push(',');
                prev.push_str(t);
            }
            _ => out.push(t.to_string()),
        }
    }
    Ok(out)
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s = input.trim();
        if let Some(rest) = s.strip_prefix("product") {
            let rest = rest.trim_start_matches(':').trim();
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| parse_err(input, "product needs (A, B, ...)"))?;
            let parts = factors(inner)?
                .iter()
                .map(|f| FamilySpec::from_str(f))
                .collect::<Result<Vec<_>>>()?;
            if parts.len() < 2 {
                return Err(parse_err(input, "product needs at least two factors"));
            }
            return Ok(FamilySpec::Product(parts));
        }
        let (name, body) = s.split_once(':').unwrap_or((s, ""));
        let spec = match name.trim() {
            "hw" | "HW" => FamilySpec::Hw,
            "S1" => FamilySpec::Torus(1),
            "torus" | "T" => FamilySpec::Torus(number(body, input)?),
            "hw_ext" => {
                let v: Vec<usize> = body.split(',').map(|x| number(x, input)).collect::<Result<_>>()?;
                match v[..] {
                    [a, b, c] if a >= 1 && b >= 1 && c >= 1 => FamilySpec::HwExt(a, b, c),
                    _ => return Err(parse_err(input, "hw_ext needs three positive multiplicities")),
                }
            }
            "C" => FamilySpec::C(keyed(body, &["k"], input)?[0]),
            "E" => FamilySpec::E(keyed(body, &["k"], input)?[0]),
            "E_tilde" | "Et" => FamilySpec::ETilde(keyed(body, &["k"], input)?[0]),
            "wtC3" => FamilySpec::WtC3(number(if body.is_empty() { "0" } else { body }, input)?),
            "C3" => FamilySpec::C3(number(if body.is_empty() { "0" } else { body }, input)?),
            "F" => {
                let v = keyed(body, &["k", "l"], input)?;
                FamilySpec::F(v[0], v[1])
            }
            "Ep" => FamilySpec::Ep(keyed(body, &["k"], input)?[0]),
            "mt" => {
                let v = keyed(body, &["k", "l"], input)?;
                FamilySpec::MappingTorus(v[0], v[1])
            }
            _ => return Err(parse_err(input, "unknown family")),
        };
        spec.validate(input)?;
        Ok(spec)
    }
}

impl FamilySpec {
    fn validate(&self, input: &str) -> Result<()> {
        let bad = |why: &str| Err(parse_err(input, why));
        match self {
            FamilySpec::C(k) | FamilySpec::E(k) | FamilySpec::ETilde(k) if *k < 3 => bad("k must be at least 3"),
            FamilySpec::WtC3(m) | FamilySpec::C3(m) if m % 2 == 1 => bad("extension dimension must be even"),
            FamilySpec::MappingTorus(0, 0) => bad("mapping torus needs (k, l) != (0, 0)"),
            FamilySpec::Torus(0) => bad("torus dimension must be positive"),
            _ => Ok(()),
        }
    }
}
