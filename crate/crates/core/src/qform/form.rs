use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::invariants::FormFingerprint;
use crate::error::{Error, Result};
use crate::exactnum::linalg::RatMatrix;
use crate::exactnum::FactorConfig;
use crate::exactnum::rational::{format_rational, parse_rational, ExactRational};

/// A nondegenerate quadratic form over Q, x -> x^T G x.
pub struct QuadForm {
    gram: RatMatrix,
    diagonal: Vec<ExactRational>,
    fingerprint: OnceLock<Result<FormFingerprint>>,
}

impl Clone for QuadForm {
    fn clone(&self) -> Self {
        QuadForm {
            gram: self.gram.clone(),
            diagonal: self.diagonal.clone(),
            fingerprint: self.fingerprint.clone(),
        }
    }
}

impl PartialEq for QuadForm {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl Eq for QuadForm {}

impl fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadForm")
            .field("dim", &self.dim())
            .field("diagonal", &self.diagonal.iter().map(format_rational).collect::<Vec<_>>())
            .finish()
    }
}

/// Symmetric elimination in the given coordinate order. Returns the pivots or
/// `Degenerate`.
pub(crate) fn diagonalize_in_order(gram: &RatMatrix, order: &[usize]) -> Result<Vec<ExactRational>> {
    let n = order.len();
    let mut a: RatMatrix = order
        .iter()
        .map(|&i| order.iter().map(|&j| gram[i][j].clone()).collect())
        .collect();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // e_k <- e_k + t e_j with t = 1/(2 a_kj) makes the leading entry 1
                let t = (&a[k][j] * ExactRational::from_integer(2.into())).recip();
                for i in 0..n {
                    let v = &a[j][i] * &t;
                    a[k][i] += v;
                }
                for i in 0..n {
                    let v = &a[i][j] * &t;
                    a[i][k] += v;
                }
            } else {
                return Err(Error::Degenerate);
            }
        }
        let pivot = a[k][k].clone();
        let row_k: Vec<ExactRational> = a[k].clone();
        for i in k + 1..n {
            if row_k[i].is_zero() {
                continue;
            }
            let f = &row_k[i] / &pivot;
            for j in k + 1..n {
                if !row_k[j].is_zero() {
                    let t = &f * &row_k[j];
                    a[i][j] -= t;
                }
            }
            a[i][k] = ExactRational::zero();
        }
        out.push(pivot);
    }
    Ok(out)
}

impl QuadForm {
    /// Builds a form from a symmetric nondegenerate Gram matrix.
    pub fn new(gram: RatMatrix) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(n, gram.iter().map(Vec::len).max().unwrap_or(0)));
        }
        for i in 0..n {
            for j in i + 1..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        let order: Vec<usize> = (0..n).collect();
        let diagonal = diagonalize_in_order(&gram, &order)?;
        Ok(QuadForm { gram, diagonal, fingerprint: OnceLock::new() })
    }

    pub fn diagonal_form(entries: &[ExactRational]) -> Result<Self> {
        let n = entries.len();
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { entries[i].clone() } else { ExactRational::zero() })
                    .collect()
            })
            .collect();
        Self::new(gram)
    }

    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        let v: Vec<ExactRational> = entries.iter().map(|&x| ExactRational::from_integer(x.into())).collect();
        Self::diagonal_form(&v)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_ints(&vec![1; n]).expect("identity is nondegenerate")
    }

    /// The hyperbolic plane <1, -1>.
    pub fn hyperbolic_plane() -> Self {
        Self::from_ints(&[1, -1]).expect("nondegenerate")
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// Diagonal entries of an equivalent diagonal form.
    pub fn diagonalize(&self) -> &[ExactRational] {
        &self.diagonal
    }

    /// Diagonalization after permuting the coordinates into `order`.
    pub fn diagonalize_with_order(&self, order: &[usize]) -> Result<Vec<ExactRational>> {
        if order.len() != self.dim() {
            return Err(Error::DimensionMismatch(order.len(), self.dim()));
        }
        diagonalize_in_order(&self.gram, order)
    }

    pub fn signature(&self) -> (usize, usize) {
        let pos = self.diagonal.iter().filter(|x| x.is_positive()).count();
        (pos, self.dim() - pos)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.diagonal.iter().all(|x| x.is_positive())
    }

    pub fn determinant(&self) -> ExactRational {
        self.diagonal.iter().fold(ExactRational::one(), |acc, x| acc * x)
    }

    pub fn fingerprint(&self) -> Result<&FormFingerprint> {
        self.fingerprint_with(&FactorConfig::default())
    }

    /// As `fingerprint`, factoring with `cfg` if not yet computed. The first
    /// outcome, success or failure, is cached.
    pub fn fingerprint_with(&self, cfg: &FactorConfig) -> Result<&FormFingerprint> {
        self.fingerprint
            .get_or_init(|| FormFingerprint::compute(self, cfg))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn scaled(&self, m: &ExactRational) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::ZeroInput);
        }
        Self::new(self.gram.iter().map(|r| r.iter().map(|x| x * m).collect()).collect())
    }

    /// Restriction to the given coordinates.
    pub fn restrict(&self, coords: &[usize]) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .map(|&i| coords.iter().map(|&j| self.gram[i][j].clone()).collect())
                .collect(),
        )
    }

    /// The form x -> f(Cx), Gram C^T G C.
    pub fn transform(&self, c: &RatMatrix) -> Result<Self> {
        let n = self.dim();
        let gc: RatMatrix = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| &self.gram[i][k] * &c[k][j]).sum()).collect())
            .collect();
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| &c[k][i] * &gc[k][j]).sum()).collect())
                .collect(),
        )
    }

    /// Whether the Gram matrix is block diagonal for the given coordinate blocks.
    pub fn is_block_diagonal(&self, blocks: &[std::ops::Range<usize>]) -> bool {
        let block_of = |i: usize| blocks.iter().position(|b| b.contains(&i));
        (0..self.dim()).all(|i| {
            (0..self.dim()).all(|j| block_of(i) == block_of(j) || self.gram[i][j].is_zero())
        })
    }
}

/// Block diagonal sum f + g.
pub fn direct_sum(f: &QuadForm, g: &QuadForm) -> QuadForm {
    let (m, n) = (f.dim(), g.dim());
    let mut gram = vec![vec![ExactRational::zero(); m + n]; m + n];
    for i in 0..m {
        gram[i][..m].clone_from_slice(&f.gram[i]);
    }
    for i in 0..n {
        gram[m + i][m..].clone_from_slice(&g.gram[i]);
    }
    let mut diagonal = f.diagonal.clone();
    diagonal.extend(g.diagonal.iter().cloned());
    QuadForm { gram, diagonal, fingerprint: OnceLock::new() }
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    dim: usize,
    gram: Vec<Vec<String>>,
}

impl Serialize for QuadForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormJson {
            dim: self.dim(),
            gram: self.gram.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FormJson::deserialize(d)?;
        if j.gram.len() != j.dim {
            return Err(serde::de::Error::custom("dim does not match gram"));
        }
        let gram = j
            .gram
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<RatMatrix>>()
            .map_err(serde::de::Error::custom)?;
        QuadForm::new(gram).map_err(serde::de::Error::custom)
    }
}
