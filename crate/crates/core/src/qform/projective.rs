use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use super::form::{direct_sum, QuadForm};
use super::invariants::{require_dims, FormFingerprint};
use crate::error::{Error, Result};
use crate::exactnum::rational::ExactRational;
use crate::exactnum::factor::is_prime_u64;
use crate::exactnum::symbols::{hilbert_nonzero, legendre_unchecked};
use crate::exactnum::{padic_is_square, Place, SquarefreeInt};

fn ser_primes<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|p| p.to_string()).collect::<Vec<_>>().serialize(s)
}

/// Projective-equivalence invariants of a positive definite form, one variant
/// per residue of the dimension mod 4. Each prime list is sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ProjectiveFingerprint {
    /// eps = -1 primes where disc is a local square.
    ZeroMod4 {
        dim: usize,
        disc: SquarefreeInt,
        #[serde(serialize_with = "ser_primes")]
        primes: Vec<BigInt>,
    },
    OneMod4 {
        dim: usize,
        #[serde(serialize_with = "ser_primes")]
        primes: Vec<BigInt>,
    },
    /// eps = -1 primes where -disc is a local square.
    TwoMod4 {
        dim: usize,
        disc: SquarefreeInt,
        #[serde(serialize_with = "ser_primes")]
        primes: Vec<BigInt>,
    },
    /// primes where (disc, -1) eps = -1.
    ThreeMod4 {
        dim: usize,
        #[serde(serialize_with = "ser_primes")]
        primes: Vec<BigInt>,
    },
}

pub fn projective_fingerprint(f: &QuadForm) -> Result<ProjectiveFingerprint> {
    if !f.is_positive_definite() {
        return Err(Error::Signature { expected: (f.dim(), 0), got: f.signature() });
    }
    let fp = f.fingerprint()?;
    let n = f.dim();
    let d = fp.disc.to_rational();
    let minus_d = -d.clone();
    let filtered = |square_of: &ExactRational| -> Result<Vec<BigInt>> {
        let mut out = Vec::new();
        for p in fp.minus_primes() {
            if padic_is_square(square_of, &Place::Prime(p.clone()))? {
                out.push(p);
            }
        }
        Ok(out)
    };
    Ok(match n % 4 {
        0 => ProjectiveFingerprint::ZeroMod4 { dim: n, disc: fp.disc.clone(), primes: filtered(&d)? },
        1 => ProjectiveFingerprint::OneMod4 { dim: n, primes: fp.minus_primes() },
        2 => ProjectiveFingerprint::TwoMod4 { dim: n, disc: fp.disc.clone(), primes: filtered(&minus_d)? },
        _ => {
            let minus_one = ExactRational::from_integer(BigInt::from(-1));
            let primes = fp
                .prime_set()
                .primes()
                .iter()
                .filter(|p| hilbert_nonzero(&d, &minus_one, &Place::Prime((*p).clone())) * fp.eps(p) == -1)
                .cloned()
                .collect();
            ProjectiveFingerprint::ThreeMod4 { dim: n, primes }
        }
    })
}

/// eps_p(m f) from the invariants of f.
fn scaled_eps(fp: &FormFingerprint, m: &ExactRational, p: &BigInt) -> i8 {
    let n = fp.dim;
    let place = Place::Prime(p.clone());
    let mut e = fp.eps(p);
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        e *= hilbert_nonzero(m, m, &place);
    }
    if n.saturating_sub(1) % 2 == 1 {
        e *= hilbert_nonzero(m, &fp.disc.to_rational(), &place);
    }
    e
}

/// Searches for a squarefree m > 0 with m f rationally equivalent to g.
/// For odd n, m is forced to be d(f) d(g). For even n the eps conditions are
/// linear over GF(2) in the exponent vector of m; m ranges over the union
/// prime set S and auxiliary primes outside S.
pub fn projective_scaling(f: &QuadForm, g: &QuadForm) -> Result<Option<BigInt>> {
    require_dims(f, g)?;
    if f.signature() != g.signature() {
        return Ok(None);
    }
    let (ff, gf) = (f.fingerprint()?, g.fingerprint()?);
    let primes = ff.prime_set().union(gf.prime_set());
    let ps = primes.primes();
    let n = f.dim();
    let check = |m: &BigInt| {
        let mq = ExactRational::from_integer(m.clone());
        ps.iter().all(|p| scaled_eps(ff, &mq, p) == gf.eps(p))
    };
    if n % 2 == 1 {
        let m = ff.disc.mul(&gf.disc);
        let mut rest = m.value().clone();
        if !rest.is_positive() {
            return Ok(None);
        }
        for p in ps {
            if (&rest % p) == BigInt::from(0) {
                rest /= p;
            }
        }
        if !rest.is_one() {
            return Ok(None);
        }
        return Ok(check(m.value()).then(|| m.value().clone()));
    }
    if ff.disc != gf.disc {
        return Ok(None);
    }
    // Unknowns: exponent bits of the primes of S, then of auxiliary primes q
    // outside S at which D = (-1)^(n/2) d is a square, so that q leaves the
    // invariants at q itself unchanged. Equations: one per prime of S.
    let bit = |s: i8| (s == -1) as u8;
    let target: Vec<u8> = ps.iter().map(|p| bit(ff.eps(p) * gf.eps(p))).collect();
    let column = |q: &BigInt| -> Vec<u8> { ps.iter().map(|p| bit(scaled_eps_ratio(ff, q, p))).collect() };
    let mut gens: Vec<BigInt> = ps.to_vec();
    let mut cols: Vec<Vec<u8>> = gens.iter().map(&column).collect();
    let mut span = Gf2Span::default();
    for c in &cols {
        span.insert(c.clone());
    }
    let d_big = if n % 4 == 2 { -ff.disc.value().clone() } else { ff.disc.value().clone() };
    let mut q = 2u64;
    let mut stale = 0;
    while !span.contains(&target) && stale < AUX_STALE_LIMIT && q < AUX_PRIME_BOUND {
        q += 1;
        let qb = BigInt::from(q);
        if !is_prime_u64(q) || primes.contains(&qb) || legendre_unchecked(&d_big, &qb) != 1 {
            continue;
        }
        let c = column(&qb);
        if span.insert(c.clone()) {
            gens.push(qb);
            cols.push(c);
            stale = 0;
        } else {
            stale += 1;
        }
    }
    let k = gens.len();
    let mut rows: Vec<Vec<u8>> = (0..ps.len())
        .map(|i| {
            let mut row: Vec<u8> = cols.iter().map(|c| c[i]).collect();
            row.push(target[i]);
            row
        })
        .collect();
    let sol = match solve_gf2(&mut rows, k) {
        Some(s) => s,
        None => return Ok(None),
    };
    let m = gens
        .iter()
        .zip(&sol)
        .filter(|(_, &e)| e == 1)
        .fold(BigInt::one(), |acc, (p, _)| acc * p);
    debug_assert!(check(&m));
    Ok(Some(m))
}

/// Auxiliary primes are tried below this bound, and the search stops after
/// this many consecutive primes that do not enlarge the span.
const AUX_PRIME_BOUND: u64 = 1 << 20;
const AUX_STALE_LIMIT: usize = 64;

/// Incrementally reduced basis of a subspace of GF(2)^k.
#[derive(Default)]
struct Gf2Span {
    basis: Vec<(usize, Vec<u8>)>,
}

impl Gf2Span {
    fn reduce(&self, mut v: Vec<u8>) -> Vec<u8> {
        for (pivot, b) in &self.basis {
            if v[*pivot] == 1 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
        }
        v
    }

    /// Adds v; returns whether the span grew.
    fn insert(&mut self, v: Vec<u8>) -> bool {
        let r = self.reduce(v);
        match r.iter().position(|&x| x == 1) {
            Some(pivot) => {
                for (_, b) in self.basis.iter_mut() {
                    if b[pivot] == 1 {
                        for (x, y) in b.iter_mut().zip(&r) {
                            *x ^= y;
                        }
                    }
                }
                self.basis.push((pivot, r));
                true
            }
            None => false,
        }
    }

    fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&x| x == 0)
    }
}

/// eps_p(q f) / eps_p(f) for a prime q.
fn scaled_eps_ratio(fp: &FormFingerprint, q: &BigInt, p: &BigInt) -> i8 {
    scaled_eps(fp, &ExactRational::from_integer(q.clone()), p) * fp.eps(p)
}

/// Gaussian elimination over GF(2); rows carry the right-hand side in the
/// last column. Free variables are set to zero.
pub(crate) fn solve_gf2(rows: &mut [Vec<u8>], k: usize) -> Option<Vec<u8>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] == 1) else { continue };
        rows.swap(r, pr);
        for i in 0..rows.len() {
            if i != r && rows[i][c] == 1 {
                for j in c..=k {
                    rows[i][j] ^= rows[r][j];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[k] == 1) {
        return None;
    }
    let mut sol = vec![0u8; k];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = rows[i][k];
    }
    Some(sol)
}

/// Projective equivalence. Positive definite pairs are decided twice, by the
/// scaling search and by fingerprints; a disagreement is an error.
pub fn projectively_equivalent(f: &QuadForm, g: &QuadForm) -> Result<bool> {
    require_dims(f, g)?;
    if f.signature() != g.signature() {
        return Ok(false);
    }
    let a = projective_scaling(f, g)?.is_some();
    if f.is_positive_definite() {
        let b = projective_fingerprint(f)? == projective_fingerprint(g)?;
        if a != b {
            return Err(Error::DeciderDisagreement(format!(
                "dim {}: scaling search says {a}, fingerprints say {b}",
                f.dim()
            )));
        }
    }
    Ok(a)
}

/// Whether q is projectively equivalent to f + <1, -1>.
pub fn realization_test(f: &QuadForm, q: &QuadForm) -> Result<bool> {
    let n = f.dim();
    if !f.is_positive_definite() {
        return Err(Error::Signature { expected: (n, 0), got: f.signature() });
    }
    if q.signature() != (n + 1, 1) {
        return Err(Error::Signature { expected: (n + 1, 1), got: q.signature() });
    }
    projectively_equivalent(&direct_sum(f, &QuadForm::hyperbolic_plane()), q)
}
