use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::form::QuadForm;
use crate::error::{Error, Result};
use crate::exactnum::rational::ExactRational;
use crate::exactnum::symbols::hilbert_nonzero;
use crate::exactnum::{factorize, FactorConfig, Place, PrimeSet, SquarefreeInt};

/// Complete rational-equivalence invariants of a form. Equality ignores the
/// stored prime set; only the primes with eps = -1 matter.
#[derive(Debug, Clone)]
pub struct FormFingerprint {
    pub dim: usize,
    pub signature: (usize, usize),
    pub disc: SquarefreeInt,
    primes: PrimeSet,
    eps: BTreeMap<BigInt, i8>,
}

/// Primes where the form can fail to be unimodular: {2}, primes of det and of
/// the common denominator of the Gram entries.
pub fn form_prime_set(f: &QuadForm) -> Result<PrimeSet> {
    form_prime_set_with(f, &FactorConfig::default())
}

fn form_prime_set_with(f: &QuadForm, cfg: &FactorConfig) -> Result<PrimeSet> {
    let lcm = entry_denominator_lcm(f);
    let det = f.determinant();
    PrimeSet::of_rationals_with([&det, &ExactRational::from_integer(lcm)], cfg)
}

fn entry_denominator_lcm(f: &QuadForm) -> BigInt {
    f.gram().iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Hasse-Witt invariant of a diagonal form, prod_{i<j} (a_i, a_j), computed
/// as prod_j (a_j, a_1...a_{j-1}).
pub fn hasse_of_diagonal(diag: &[ExactRational], place: &Place) -> i8 {
    let mut acc = 1i8;
    let mut prefix = match diag.first() {
        Some(a) => a.clone(),
        None => return 1,
    };
    for a in &diag[1..] {
        acc *= hilbert_nonzero(a, &prefix, place);
        prefix *= a;
    }
    acc
}

impl FormFingerprint {
    pub(crate) fn compute(f: &QuadForm, cfg: &FactorConfig) -> Result<Self> {
        // one factorization of det serves both the prime set and the disc
        let det = f.determinant();
        let mut odd = BigInt::one();
        let mut found = Vec::new();
        for n in [det.numer(), det.denom()] {
            for (p, e) in factorize(n, cfg)? {
                if e % 2 == 1 {
                    odd *= &p;
                }
                found.push(p);
            }
        }
        let lcm = entry_denominator_lcm(f);
        if !lcm.is_one() {
            found.extend(factorize(&lcm, cfg)?.into_iter().map(|(p, _)| p));
        }
        let primes = PrimeSet::from_primes(found);
        let disc = SquarefreeInt::from_parts(det.is_negative(), odd);
        let eps = primes
            .primes()
            .iter()
            .map(|p| (p.clone(), hasse_of_diagonal(f.diagonalize(), &Place::Prime(p.clone()))))
            .collect();
        Ok(FormFingerprint { dim: f.dim(), signature: f.signature(), disc, primes, eps })
    }

    pub fn prime_set(&self) -> &PrimeSet {
        &self.primes
    }

    pub fn eps(&self, p: &BigInt) -> i8 {
        self.eps.get(p).copied().unwrap_or(1)
    }

    /// Primes with eps = -1.
    pub fn minus_primes(&self) -> Vec<BigInt> {
        self.eps.iter().filter(|(_, &e)| e == -1).map(|(p, _)| p.clone()).collect()
    }
}

impl PartialEq for FormFingerprint {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.signature == other.signature
            && self.disc == other.disc
            && self.minus_primes() == other.minus_primes()
    }
}

impl Eq for FormFingerprint {}

impl std::hash::Hash for FormFingerprint {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.signature.hash(state);
        self.disc.hash(state);
        self.minus_primes().hash(state);
    }
}

pub(crate) struct EpsMap<'a>(pub &'a BTreeMap<BigInt, i8>);

impl Serialize for EpsMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (p, e) in self.0 {
            m.serialize_entry(&p.to_string(), e)?;
        }
        m.end()
    }
}

impl Serialize for FormFingerprint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            dim: usize,
            signature: (usize, usize),
            disc: &'a SquarefreeInt,
            eps: EpsMap<'a>,
        }
        Out { dim: self.dim, signature: self.signature, disc: &self.disc, eps: EpsMap(&self.eps) }
            .serialize(s)
    }
}

pub fn discriminant(f: &QuadForm) -> Result<SquarefreeInt> {
    Ok(f.fingerprint()?.disc.clone())
}

/// eps_v(f) at a prime or the real place.
pub fn hasse_witt(f: &QuadForm, place: &Place) -> i8 {
    hasse_of_diagonal(f.diagonalize(), place)
}

pub fn rationally_equivalent(f: &QuadForm, g: &QuadForm) -> Result<bool> {
    if f.dim() != g.dim() || f.signature() != g.signature() {
        return Ok(false);
    }
    Ok(f.fingerprint()? == g.fingerprint()?)
}

pub(crate) fn require_dims(f: &QuadForm, g: &QuadForm) -> Result<()> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(f.dim(), g.dim()));
    }
    Ok(())
}
