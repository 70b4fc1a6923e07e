use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::factor::{factorize, FactorConfig};
use super::rational::ExactRational;
use crate::error::{Error, Result};

/// Canonical squarefree representative of a class in Q^x / (Q^x)^2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquarefreeInt(BigInt);

// Serialized as a plain JSON integer of any size.
impl Serialize for SquarefreeInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n: serde_json::Number = self.0.to_string().parse().map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SquarefreeInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        let v: BigInt = n.to_string().parse().map_err(serde::de::Error::custom)?;
        let sf = squarefree_part(&ExactRational::from_integer(v.clone())).map_err(serde::de::Error::custom)?;
        if sf.0 != v {
            return Err(serde::de::Error::custom("not squarefree"));
        }
        Ok(sf)
    }
}

impl SquarefreeInt {
    pub fn from_i64(v: i64) -> Result<Self> {
        squarefree_part(&ExactRational::from_integer(BigInt::from(v)))
    }

    /// From the sign and the product of primes of odd exponent.
    pub(crate) fn from_parts(negative: bool, odd_primes: BigInt) -> Self {
        SquarefreeInt(if negative { -odd_primes } else { odd_primes })
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn to_rational(&self) -> ExactRational {
        ExactRational::from_integer(self.0.clone())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// Product in the square-class group.
    pub fn mul(&self, other: &SquarefreeInt) -> SquarefreeInt {
        let g = num_integer::Integer::gcd(&self.0, &other.0);
        let v = (&self.0 / &g) * (&other.0 / &g);
        SquarefreeInt(v)
    }
}

impl fmt::Display for SquarefreeInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn odd_part_product(n: &BigInt, cfg: &FactorConfig) -> Result<BigInt> {
    Ok(factorize(n, cfg)?
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .fold(BigInt::one(), |acc, (p, _)| acc * p))
}

/// The squarefree integer s with x = s * r^2 for some rational r.
pub fn squarefree_part(x: &ExactRational) -> Result<SquarefreeInt> {
    squarefree_part_with(x, &FactorConfig::default())
}

pub fn squarefree_part_with(x: &ExactRational, cfg: &FactorConfig) -> Result<SquarefreeInt> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    // num/den ~ num*den modulo squares
    let s = odd_part_product(x.numer(), cfg)? * odd_part_product(x.denom(), cfg)?;
    Ok(SquarefreeInt(if x.is_negative() { -s } else { s }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    // Brute force: find squarefree s in a window with x / s a rational square.
    fn brute_force(x: &ExactRational) -> i64 {
        let is_square_int = |n: &BigInt| {
            if n.is_negative() {
                return false;
            }
            let r = n.sqrt();
            &r * &r == *n
        };
        for s in (-400i64..=400).filter(|&s| s != 0) {
            let q = x / int(s);
            if q.is_positive() && is_square_int(q.numer()) && is_square_int(q.denom()) {
                let sf = (2..=20i64).all(|p| s % (p * p) != 0);
                if sf {
                    return s;
                }
            }
        }
        panic!("no representative in window");
    }

    #[test]
    fn documented_examples() {
        assert_eq!(squarefree_part(&int(18)).unwrap().value(), &BigInt::from(2));
        assert_eq!(squarefree_part(&rat(4, 9)).unwrap().value(), &BigInt::from(1));
        let v = squarefree_part(&rat(-12, 5)).unwrap();
        assert_eq!(v.value(), &BigInt::from(-15));
        assert_eq!(brute_force(&rat(-12, 5)), -15);
        assert_eq!(squarefree_part(&int(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn agrees_with_brute_force_on_small_rationals() {
        for n in -30i64..=30 {
            for d in 1..=12 {
                if n == 0 {
                    continue;
                }
                let x = rat(n, d);
                assert_eq!(
                    squarefree_part(&x).unwrap().value(),
                    &BigInt::from(brute_force(&x)),
                    "{x}"
                );
            }
        }
    }

    #[test]
    fn class_product() {
        let a = SquarefreeInt::from_i64(6).unwrap();
        let b = SquarefreeInt::from_i64(-15).unwrap();
        assert_eq!(a.mul(&b).value(), &BigInt::from(-10));
    }
}
