use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{IntMatrix, TorusVector};
use crate::error::{Error, Result};
use crate::exactnum::linalg::{nullspace, primitive_integer_vector, UnionFind};
use crate::exactnum::rational::ExactRational;
use crate::exactnum::smith_normal_form_cols;

/// x -> A x + t on R^n / Z^n with A in GL_n(Z).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "IsometryJson")]
pub struct AffineTorusIsometry {
    linear: IntMatrix,
    translation: TorusVector,
}

#[derive(Deserialize)]
struct IsometryJson {
    linear: IntMatrix,
    translation: TorusVector,
}

impl TryFrom<IsometryJson> for AffineTorusIsometry {
    type Error = Error;
    fn try_from(j: IsometryJson) -> Result<Self> {
        AffineTorusIsometry::new(j.linear, j.translation)
    }
}

impl AffineTorusIsometry {
    pub fn new(linear: IntMatrix, translation: TorusVector) -> Result<Self> {
        if linear.dim() != translation.dim() {
            return Err(Error::DimensionMismatch(linear.dim(), translation.dim()));
        }
        if !linear.det().abs().is_one() {
            return Err(Error::NotUnimodular);
        }
        Ok(AffineTorusIsometry { linear, translation })
    }

    pub(crate) fn from_parts(linear: IntMatrix, translation: TorusVector) -> Self {
        debug_assert_eq!(linear.dim(), translation.dim());
        AffineTorusIsometry { linear, translation }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_parts(IntMatrix::identity(n), TorusVector::zero(n))
    }

    pub fn linear_only(linear: IntMatrix) -> Result<Self> {
        let n = linear.dim();
        Self::new(linear, TorusVector::zero(n))
    }

    pub fn dim(&self) -> usize {
        self.linear.dim()
    }

    pub fn linear(&self) -> &IntMatrix {
        &self.linear
    }

    pub fn translation(&self) -> &TorusVector {
        &self.translation
    }

    pub fn is_identity(&self) -> bool {
        self.translation.is_zero() && self.linear.is_identity()
    }

    /// self o other: x -> A1 (A2 x + t2) + t1.
    pub fn compose(&self, other: &AffineTorusIsometry) -> Result<Self> {
        Ok(AffineTorusIsometry {
            linear: self.linear.mul(&other.linear)?,
            translation: TorusVector::affine(&self.linear, &other.translation, &self.translation)?,
        })
    }

    pub fn power(&self, k: u32) -> Result<Self> {
        let mut acc = Self::identity(self.dim());
        for _ in 0..k {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Order in the torus isometry group, if at most `bound`.
    pub fn order(&self, bound: usize) -> Result<Option<usize>> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Ok(Some(k));
            }
            acc = acc.compose(self)?;
        }
        Ok(None)
    }

    pub fn block_sum(&self, other: &AffineTorusIsometry) -> Self {
        Self::from_parts(self.linear.block_sum(&other.linear), self.translation.concat(&other.translation))
    }

    /// I_before + self + I_after.
    pub fn embed(&self, before: usize, after: usize) -> Self {
        AffineTorusIsometry::identity(before)
            .block_sum(self)
            .block_sum(&AffineTorusIsometry::identity(after))
    }

    pub fn has_fixed_point(&self) -> bool {
        FixedPointData::new(&self.linear).has_fixed_point(&self.translation)
    }
}

/// Whether x -> A x + t fixes some point of the torus.
pub fn has_fixed_point(iso: &AffineTorusIsometry) -> bool {
    iso.has_fixed_point()
}

/// Integer conditions on t for x -> A x + t to have a fixed point, for one
/// block of coordinates coupled by A - I: with W an integer basis of the left
/// kernel of A - I and U W V = D, a fixed point exists iff D | U W t
/// (entrywise) for some lift of t, which is independent of the lift.
#[derive(Debug, Clone)]
struct Block {
    coords: Vec<usize>,
    rows: Vec<(Vec<(usize, BigInt)>, BigInt)>,
}

/// Precomputed fixed-point test for a fixed linear part.
#[derive(Debug, Clone)]
pub struct FixedPointData {
    blocks: Vec<Block>,
}

impl FixedPointData {
    pub fn new(a: &IntMatrix) -> Self {
        let n = a.dim();
        let mut uf = UnionFind::new(n);
        for i in 0..n {
            for &(j, _) in a.row(i) {
                if j as usize != i {
                    uf.union(i, j as usize);
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        let mut blocks = Vec::new();
        for coords in groups.into_values() {
            if coords.len() == 1 {
                let i = coords[0];
                if a.get(i, i) == 1 {
                    // A fixes e_i: need t_i integral
                    blocks.push(Block { coords, rows: vec![(vec![(0, BigInt::one())], BigInt::one())] });
                }
                continue;
            }
            let m = a.minus_identity_block(&coords);
            let k = coords.len();
            let mt: Vec<Vec<ExactRational>> = (0..k)
                .map(|j| (0..k).map(|i| ExactRational::from_integer(m[i][j].clone())).collect())
                .collect();
            let kernel = nullspace(&mt, k);
            if kernel.is_empty() {
                continue;
            }
            let w: Vec<Vec<BigInt>> = kernel.iter().map(|v| primitive_integer_vector(v)).collect();
            let snf = smith_normal_form_cols(&w, k);
            let d = snf.diagonal();
            let rows = (0..w.len())
                .map(|i| {
                    let uw: Vec<(usize, BigInt)> = (0..k)
                        .map(|c| {
                            let v = (0..w.len()).fold(BigInt::zero(), |acc, r| acc + &snf.u[i][r] * &w[r][c]);
                            (c, v)
                        })
                        .filter(|(_, v)| !v.is_zero())
                        .collect();
                    (uw, d[i].abs())
                })
                .collect();
            blocks.push(Block { coords, rows });
        }
        FixedPointData { blocks }
    }

    pub fn has_fixed_point(&self, t: &TorusVector) -> bool {
        let den = BigInt::from(t.den());
        let num = t.numerators();
        self.blocks.iter().all(|b| {
            b.rows.iter().all(|(row, d)| {
                let s = row
                    .iter()
                    .fold(BigInt::zero(), |acc, (c, v)| acc + v * num[b.coords[*c]]);
                (s % (d * &den)).is_zero()
            })
        })
    }
}
