use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::rational::{format_rational, parse_rational, ExactRational};

/// Square integer matrix in compressed sparse row form. Entries within a row
/// are sorted by column and nonzero, so equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    n: u32,
    row_ptr: Vec<u32>,
    entries: Vec<(u32, i32)>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_dense())
    }
}

fn narrow(v: i64) -> Result<i32> {
    i32::try_from(v).map_err(|_| Error::Overflow("integer matrix entry"))
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        IntMatrix {
            n: n as u32,
            row_ptr: (0..=n as u32).collect(),
            entries: (0..n as u32).map(|i| (i, 1)).collect(),
        }
    }

    pub(crate) fn from_rows(n: usize, rows: impl IntoIterator<Item = Vec<(u32, i32)>>) -> Self {
        let mut row_ptr = vec![0u32];
        let mut entries = Vec::new();
        for mut r in rows {
            r.sort_unstable_by_key(|e| e.0);
            entries.extend(r.into_iter().filter(|e| e.1 != 0));
            row_ptr.push(entries.len() as u32);
        }
        debug_assert_eq!(row_ptr.len(), n + 1);
        IntMatrix { n: n as u32, row_ptr, entries }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(n, r.len()));
        }
        let mut sparse = Vec::with_capacity(n);
        for r in rows {
            let mut row = Vec::new();
            for (j, &v) in r.iter().enumerate() {
                if v != 0 {
                    row.push((j as u32, narrow(v)?));
                }
            }
            sparse.push(row);
        }
        Ok(Self::from_rows(n, sparse))
    }

    pub fn diagonal(d: &[i64]) -> Result<Self> {
        let n = d.len();
        let mut rows = Vec::with_capacity(n);
        for (i, &v) in d.iter().enumerate() {
            rows.push(vec![(i as u32, narrow(v)?)]);
        }
        Ok(Self::from_rows(n, rows))
    }

    /// Matrix sending e_j to e_{perm[j]}.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut rows = vec![Vec::new(); n];
        for (j, &i) in perm.iter().enumerate() {
            rows[i].push((j as u32, 1));
        }
        Self::from_rows(n, rows)
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn row(&self, i: usize) -> &[(u32, i32)] {
        &self.entries[self.row_ptr[i] as usize..self.row_ptr[i + 1] as usize]
    }

    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.row(i).iter().find(|e| e.0 as usize == j).map_or(0, |e| e.1)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut r = vec![0i64; n];
                for &(j, v) in self.row(i) {
                    r[j as usize] = v as i64;
                }
                r
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.entries.len() == self.dim()
            && (0..self.dim()).all(|i| self.row(i) == [(i as u32, 1)])
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let n = self.dim();
        let mut acc = vec![0i64; n];
        let mut touched: Vec<u32> = Vec::new();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            for &(k, a) in self.row(i) {
                for &(j, b) in other.row(k as usize) {
                    let slot = &mut acc[j as usize];
                    if *slot == 0 {
                        touched.push(j);
                    }
                    *slot += a as i64 * b as i64;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut row = Vec::with_capacity(touched.len());
            for &j in &touched {
                let v = std::mem::take(&mut acc[j as usize]);
                if v != 0 {
                    row.push((j, narrow(v)?));
                }
            }
            touched.clear();
            rows.push(row);
        }
        Ok(Self::from_rows(n, rows))
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.dim();
        let mut rows = vec![Vec::new(); n];
        for i in 0..n {
            for &(j, v) in self.row(i) {
                rows[j as usize].push((i as u32, v));
            }
        }
        Self::from_rows(n, rows)
    }

    pub fn block_sum(&self, other: &IntMatrix) -> IntMatrix {
        let (m, n) = (self.dim(), other.dim());
        let rows = (0..m)
            .map(|i| self.row(i).to_vec())
            .chain((0..n).map(|i| other.row(i).iter().map(|&(j, v)| (j + m as u32, v)).collect()));
        Self::from_rows(m + n, rows)
    }

    /// Block diagonal matrix from square blocks.
    pub fn block_diagonal(blocks: &[IntMatrix]) -> IntMatrix {
        blocks.iter().fold(IntMatrix::identity(0), |acc, b| acc.block_sum(b))
    }

    /// Block matrix from a grid of equally sized square blocks, `None` = zero.
    pub fn from_blocks(grid: &[Vec<Option<&IntMatrix>>]) -> Result<IntMatrix> {
        let k = grid.len();
        let b = grid
            .iter()
            .flatten()
            .flatten()
            .next()
            .map(|m| m.dim())
            .ok_or(Error::InvalidParameters("empty block grid".into()))?;
        let mut rows = Vec::with_capacity(k * b);
        for brow in grid {
            if brow.len() != k {
                return Err(Error::DimensionMismatch(k, brow.len()));
            }
            for i in 0..b {
                let mut row = Vec::new();
                for (bj, blk) in brow.iter().enumerate() {
                    if let Some(m) = blk {
                        if m.dim() != b {
                            return Err(Error::DimensionMismatch(b, m.dim()));
                        }
                        row.extend(m.row(i).iter().map(|&(j, v)| (j + (bj * b) as u32, v)));
                    }
                }
                rows.push(row);
            }
        }
        Ok(Self::from_rows(k * b, rows))
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        let n = self.dim();
        let mut a: Vec<Vec<BigInt>> =
            self.to_dense().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        let mut sign = BigInt::from(1);
        let mut prev = BigInt::from(1);
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            return sign;
        }
        sign * &a[n - 1][n - 1]
    }

    /// A - I as a dense integer matrix restricted to `coords`.
    pub(crate) fn minus_identity_block(&self, coords: &[usize]) -> Vec<Vec<BigInt>> {
        let pos: std::collections::HashMap<usize, usize> =
            coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        coords
            .iter()
            .map(|&i| {
                let mut r = vec![BigInt::zero(); coords.len()];
                for &(j, v) in self.row(i) {
                    if let Some(&jj) = pos.get(&(j as usize)) {
                        r[jj] += v;
                    }
                }
                r[pos[&i]] -= 1;
                r
            })
            .collect()
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_dense().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        IntMatrix::from_dense(&rows).map_err(serde::de::Error::custom)
    }
}

/// Point of R^n / Z^n with rational coordinates over a common denominator,
/// numerators reduced into [0, den) and den minimal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusVector {
    den: i64,
    num: Vec<i64>,
}

impl fmt::Debug for TorusVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.to_rationals().iter().map(format_rational).collect();
        write!(f, "({})", v.join(", "))
    }
}

impl TorusVector {
    pub fn zero(n: usize) -> Self {
        TorusVector { den: 1, num: vec![0; n] }
    }

    fn normalized(den: i64, mut num: Vec<i64>) -> Self {
        for x in num.iter_mut() {
            *x = x.rem_euclid(den);
        }
        let g = num.iter().fold(den, |g, &x| g.gcd(&x));
        if g > 1 {
            for x in num.iter_mut() {
                *x /= g;
            }
            return TorusVector { den: den / g, num };
        }
        TorusVector { den, num }
    }

    pub fn from_rationals(v: &[ExactRational]) -> Result<Self> {
        let den = v.iter().try_fold(1i64, |acc, x| {
            let d = x.denom().to_i64().ok_or(Error::Overflow("translation denominator"))?;
            Ok::<i64, Error>(acc.lcm(&d))
        })?;
        let mut num = Vec::with_capacity(v.len());
        for x in v {
            let scaled = (x * ExactRational::from_integer(den.into())).to_integer();
            let r = scaled.mod_floor(&BigInt::from(den));
            num.push(r.to_i64().expect("reduced below den"));
        }
        Ok(Self::normalized(den, num))
    }

    /// Vector with entries num[i] / den.
    pub fn from_fractions(den: i64, num: Vec<i64>) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidParameters("translation denominator must be positive".into()));
        }
        Ok(Self::normalized(den, num))
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn numerators(&self) -> &[i64] {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.den == 1
    }

    pub fn to_rationals(&self) -> Vec<ExactRational> {
        self.num
            .iter()
            .map(|&x| ExactRational::new(x.into(), self.den.into()))
            .collect()
    }

    pub fn concat(&self, other: &TorusVector) -> TorusVector {
        let den = self.den.lcm(&other.den);
        let (a, b) = (den / self.den, den / other.den);
        let num = self.num.iter().map(|x| x * a).chain(other.num.iter().map(|x| x * b)).collect();
        Self::normalized(den, num)
    }

    /// A t + s mod Z^n.
    pub fn affine(a: &IntMatrix, t: &TorusVector, s: &TorusVector) -> Result<TorusVector> {
        if a.dim() != t.dim() || t.dim() != s.dim() {
            return Err(Error::DimensionMismatch(a.dim(), t.dim()));
        }
        let den = t.den.lcm(&s.den);
        let (ft, fs) = ((den / t.den) as i128, (den / s.den) as i128);
        let d = den as i128;
        let mut num = Vec::with_capacity(t.dim());
        for i in 0..a.dim() {
            let mut acc: i128 = s.num[i] as i128 * fs;
            for &(j, v) in a.row(i) {
                acc += v as i128 * t.num[j as usize] as i128 * ft;
            }
            num.push(acc.rem_euclid(d) as i64);
        }
        Ok(Self::normalized(den, num))
    }
}

impl Serialize for TorusVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rationals().iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let r = v
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        TorusVector::from_rationals(&r).map_err(serde::de::Error::custom)
    }
}
