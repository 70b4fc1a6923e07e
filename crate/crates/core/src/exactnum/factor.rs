//! Integer factorization for the modest sizes that appear in Gram determinants.
//!
//! Trial division by a sieved prime table handles almost everything; a
//! Miller-Rabin test and Pollard-Brent rho with an iteration budget finish the
//! occasional large cofactor.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorConfig {
    /// Trial division bound.
    pub trial_bound: u32,
    /// Iterations allowed per Pollard-Brent attempt.
    pub rho_budget: u64,
    /// Pollard-Brent attempts (distinct polynomial constants) per split.
    pub rho_attempts: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_bound: 1_000_000,
            rho_budget: 2_000_000,
            rho_attempts: 8,
        }
    }
}

fn sieve(bound: u32) -> Vec<u32> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn primes_up_to(bound: u32) -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    let table = TABLE.get_or_init(|| sieve(FactorConfig::default().trial_bound.max(1000)));
    let end = table.partition_point(|&p| p <= bound);
    &table[..end]
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin; deterministic below 3.3e24, probabilistic beyond.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53] {
        let a = BigInt::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigInt, c: u64, budget: u64) -> Option<BigInt> {
    let c = BigInt::from(c);
    let f = |x: &BigInt| (x * x + &c) % n;
    let mut y = BigInt::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigInt::one();
    let mut g = BigInt::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let m: u64 = 128;
    let mut spent = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (q * (&x - &y).abs()) % n;
            }
            g = q.gcd(n);
            k += m;
            spent += m;
        }
        r *= 2;
        if spent > budget {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = (&x - &ys).abs().gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

fn split_large(n: BigInt, cfg: &FactorConfig, out: &mut Vec<(BigInt, u32)>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if is_probable_prime(&n) {
        out.push((n, 1));
        return Ok(());
    }
    let root = n.sqrt();
    if &root * &root == n {
        let mut inner = Vec::new();
        split_large(root, cfg, &mut inner)?;
        out.extend(inner.into_iter().map(|(p, e)| (p, 2 * e)));
        return Ok(());
    }
    for c in 1..=cfg.rho_attempts {
        if let Some(d) = pollard_brent(&n, c, cfg.rho_budget) {
            let other = &n / &d;
            split_large(d, cfg, out)?;
            split_large(other, cfg, out)?;
            return Ok(());
        }
    }
    Err(Error::FactorizationBudget(n.to_string()))
}

/// Prime factorization of |n| as ascending (prime, exponent) pairs.
pub fn factorize(n: &BigInt, cfg: &FactorConfig) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut rest = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut digits = rest.to_u64_digits().1;
    for &p in primes_up_to(cfg.trial_bound) {
        let p64 = p as u64;
        if let [small] = digits[..] {
            if small == 1 || p64 * p64 > small {
                break;
            }
        }
        // remainder over machine words, dividing only on a hit
        let r = digits
            .iter()
            .rev()
            .fold(0u128, |r, &d| ((r << 64) | d as u128) % p64 as u128);
        if r != 0 {
            continue;
        }
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        out.push((BigInt::from(p), e));
        digits = rest.to_u64_digits().1;
    }
    let mut large = Vec::new();
    if !rest.is_one() {
        let bound = BigInt::from(cfg.trial_bound);
        if rest <= &bound * &bound {
            large.push((rest, 1));
        } else {
            split_large(rest, cfg, &mut large)?;
        }
    }
    out.extend(large);
    out.sort();
    let mut merged: Vec<(BigInt, u32)> = Vec::with_capacity(out.len());
    for (p, e) in out {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(merged)
}
