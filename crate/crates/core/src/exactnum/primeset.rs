use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::factor::{factorize, FactorConfig};
use super::rational::ExactRational;
use super::symbols::Place;
use crate::error::Result;

/// Finite ascending set of primes, always containing 2. Outside it every
/// Hilbert symbol among the scalars that produced it is +1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeSet {
    primes: Vec<BigInt>,
}

impl Default for PrimeSet {
    fn default() -> Self {
        PrimeSet { primes: vec![BigInt::from(2)] }
    }
}

impl PrimeSet {
    pub fn from_primes<I: IntoIterator<Item = BigInt>>(primes: I) -> Self {
        let mut set: BTreeSet<BigInt> = primes.into_iter().collect();
        set.insert(BigInt::from(2));
        PrimeSet { primes: set.into_iter().collect() }
    }

    /// {2} together with every prime dividing a numerator or denominator.
    pub fn of_rationals<'a, I>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a ExactRational>,
    {
        Self::of_rationals_with(values, &FactorConfig::default())
    }

    pub fn of_rationals_with<'a, I>(values: I, cfg: &FactorConfig) -> Result<Self>
    where
        I: IntoIterator<Item = &'a ExactRational>,
    {
        let mut set = BTreeSet::new();
        for v in values {
            for n in [v.numer(), v.denom()] {
                if n.is_zero() || n == &BigInt::one() || n == &-BigInt::one() {
                    continue;
                }
                set.extend(factorize(n, cfg)?.into_iter().map(|(p, _)| p));
            }
        }
        Ok(Self::from_primes(set))
    }

    pub fn union(&self, other: &PrimeSet) -> PrimeSet {
        Self::from_primes(self.primes.iter().chain(other.primes.iter()).cloned())
    }

    pub fn primes(&self) -> &[BigInt] {
        &self.primes
    }

    pub fn contains(&self, p: &BigInt) -> bool {
        self.primes.binary_search(p).is_ok()
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Finite places followed by the real place.
    pub fn places(&self) -> impl Iterator<Item = Place> + '_ {
        self.primes
            .iter()
            .cloned()
            .map(Place::Prime)
            .chain(std::iter::once(Place::Real))
    }
}
