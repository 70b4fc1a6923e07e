//! Legendre and Hilbert symbols, p-adic square tests.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::factor::is_probable_prime;
use super::rational::ExactRational;
use crate::error::{Error, Result};

/// A place of Q: a finite prime or the real place.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Prime(BigInt),
    Real,
}

impl Place {
    pub fn prime(p: u64) -> Place {
        Place::Prime(BigInt::from(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => p.fmt(f),
            Place::Real => f.write_str("inf"),
        }
    }
}

/// Valuation of a nonzero integer at p, and the p-free part.
pub fn valuation(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return (v, rest);
        }
        rest = q;
        v += 1;
    }
}

/// Valuation of a nonzero rational at p and its unit part folded into an
/// integer numerator*denominator (same square class, same residue symbols).
fn split_rational(x: &ExactRational, p: &BigInt) -> (i64, BigInt) {
    let (vn, un) = valuation(x.numer(), p);
    let (vd, ud) = valuation(x.denom(), p);
    (vn as i64 - vd as i64, un * ud)
}

/// Jacobi symbol (a/n) for odd positive n.
fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

pub(crate) fn legendre_unchecked(a: &BigInt, p: &BigInt) -> i32 {
    jacobi(a, p)
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre_symbol(a: &BigInt, p: &BigInt) -> Result<i32> {
    let two = BigInt::from(2);
    if p <= &two || p.is_even() || !is_probable_prime(p) {
        return Err(Error::NotOddPrime(p.to_string()));
    }
    Ok(legendre_unchecked(a, p))
}

/// Whether a nonzero rational is a square in Q_p (or in R for the real place).
pub fn padic_is_square(a: &ExactRational, place: &Place) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    match place {
        Place::Real => Ok(a.is_positive()),
        Place::Prime(p) => {
            let (v, u) = split_rational(a, p);
            if v % 2 != 0 {
                return Ok(false);
            }
            if p == &BigInt::from(2) {
                Ok(u.mod_floor(&BigInt::from(8)).is_one())
            } else {
                Ok(legendre_unchecked(&u, p) == 1)
            }
        }
    }
}

fn mod8(u: &BigInt) -> u32 {
    u.mod_floor(&BigInt::from(8)).to_u32().unwrap()
}

/// Hilbert symbol (a, b)_v via the closed local formulas.
pub fn hilbert_symbol(a: &ExactRational, b: &ExactRational, place: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(hilbert_nonzero(a, b, place))
}

pub(crate) fn hilbert_nonzero(a: &ExactRational, b: &ExactRational, place: &Place) -> i8 {
    match place {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = split_rational(a, p);
            let (beta, v) = split_rational(b, p);
            if p == &BigInt::from(2) {
                let (u8_, v8) = (mod8(&u), mod8(&v));
                let eps = |x: u32| ((x - 1) / 2) % 2;
                let omega = |x: u32| ((x * x - 1) / 8) % 2;
                let e = eps(u8_) * eps(v8)
                    + (alpha.rem_euclid(2) as u32) * omega(v8)
                    + (beta.rem_euclid(2) as u32) * omega(u8_);
                if e.is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            } else {
                let alpha = alpha.rem_euclid(2);
                let beta = beta.rem_euclid(2);
                let mut s: i32 = 1;
                let p_mod4_is3 = p.mod_floor(&BigInt::from(4)) == BigInt::from(3);
                if alpha == 1 && beta == 1 && p_mod4_is3 {
                    s = -s;
                }
                if beta == 1 {
                    s *= legendre_unchecked(&u, p);
                }
                if alpha == 1 {
                    s *= legendre_unchecked(&v, p);
                }
                s as i8
            }
        }
    }
}
