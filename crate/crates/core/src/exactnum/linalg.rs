//! Exact dense and sparse linear algebra over Q.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::ExactRational;

pub type RatMatrix = Vec<Vec<ExactRational>>;

/// Reduces `rows` (each of length `cols`) to reduced row echelon form in place
/// and returns the pivot columns. Zero rows are dropped.
pub fn rref(rows: &mut RatMatrix, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of {x : rows * x = 0}.
pub fn nullspace(rows: &[Vec<ExactRational>], cols: usize) -> RatMatrix {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, cols);
    let mut is_pivot = vec![None; cols];
    for (i, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(i);
    }
    (0..cols)
        .filter(|&c| is_pivot[c].is_none())
        .map(|free| {
            let mut v = vec![ExactRational::zero(); cols];
            v[free] = ExactRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][free].clone();
            }
            v
        })
        .collect()
}

pub fn rank(rows: &[Vec<ExactRational>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, cols).len()
}

pub fn determinant(m: &[Vec<ExactRational>]) -> ExactRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = ExactRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return ExactRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
    }
    det
}

/// Clears denominators and divides by the content, fixing the sign so the
/// first nonzero entry is positive.
pub fn primitive_integer_vector(v: &[ExactRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * ExactRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Homogeneous sparse linear system with integer coefficients.
#[derive(Debug, Clone, Default)]
pub struct SparseSystem {
    cols: usize,
    rows: Vec<Vec<(usize, BigInt)>>,
}

impl SparseSystem {
    pub fn new(cols: usize) -> Self {
        SparseSystem { cols, rows: Vec::new() }
    }

    /// Adds the equation sum coeff * x_col = 0; repeated columns are merged.
    pub fn push(&mut self, terms: impl IntoIterator<Item = (usize, BigInt)>) {
        let mut merged: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (c, v) in terms {
            debug_assert!(c < self.cols);
            *merged.entry(c).or_insert_with(BigInt::zero) += v;
        }
        let row: Vec<(usize, BigInt)> = merged.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        if !row.is_empty() {
            self.rows.push(row);
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Basis of the solution space, as sparse vectors. The unknowns split into
    /// independent blocks (connected through shared equations) that are solved
    /// separately; the result does not depend on that split.
    pub fn nullspace(&self) -> Vec<Vec<(usize, ExactRational)>> {
        let mut uf = UnionFind::new(self.cols);
        for row in &self.rows {
            for w in row.windows(2) {
                uf.union(w[0].0, w[1].0);
            }
        }
        let mut block_cols: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for c in 0..self.cols {
            block_cols.entry(uf.find(c)).or_default().push(c);
        }
        let mut block_rows: BTreeMap<usize, Vec<&Vec<(usize, BigInt)>>> = BTreeMap::new();
        for row in &self.rows {
            block_rows.entry(uf.find(row[0].0)).or_default().push(row);
        }
        let mut basis: Vec<(usize, Vec<(usize, ExactRational)>)> = Vec::new();
        for (root, cols) in &block_cols {
            let local: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let mut dense: RatMatrix = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for row in block_rows.get(root).map(Vec::as_slice).unwrap_or(&[]) {
                if !seen.insert((*row).clone()) {
                    continue;
                }
                let mut r = vec![ExactRational::zero(); cols.len()];
                for (c, v) in row.iter() {
                    r[local[c]] = ExactRational::from_integer(v.clone());
                }
                dense.push(r);
            }
            for v in nullspace_incremental(dense, cols.len()) {
                let sparse: Vec<(usize, ExactRational)> = v
                    .into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| (cols[i], x))
                    .collect();
                let lead = sparse[0].0;
                basis.push((lead, sparse));
            }
        }
        basis.sort_by_key(|(lead, _)| *lead);
        basis.into_iter().map(|(_, v)| v).collect()
    }
}

// Row-by-row reduction that keeps the echelon basis small when most
// equations are redundant.
fn nullspace_incremental(rows: RatMatrix, cols: usize) -> RatMatrix {
    let mut basis: Vec<(usize, Vec<ExactRational>)> = Vec::new();
    for mut row in rows {
        for (pc, b) in &basis {
            if !row[*pc].is_zero() {
                let f = row[*pc].clone();
                for (x, y) in row.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let inv = row[pc].recip();
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for (_, b) in basis.iter_mut() {
            if !b[pc].is_zero() {
                let f = b[pc].clone();
                for (x, y) in b.iter_mut().zip(&row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        basis.push((pc, row));
        if basis.len() == cols {
            break;
        }
    }
    basis.sort_by_key(|(pc, _)| *pc);
    let m: RatMatrix = basis.into_iter().map(|(_, r)| r).collect();
    nullspace(&m, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn rm(rows: &[&[i64]]) -> RatMatrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn determinant_and_rank() {
        assert_eq!(determinant(&rm(&[&[2, 1], &[1, 2]])), int(3));
        assert_eq!(determinant(&rm(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(&rm(&[&[1, 2], &[2, 4]])), int(0));
        assert_eq!(rank(&rm(&[&[1, 2, 3], &[2, 4, 6]]), 3), 1);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = rm(&[&[1, 2, 3, 4], &[2, 4, 7, 9]]);
        let ns = nullspace(&m, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                let s: ExactRational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn sparse_matches_dense() {
        let mut sys = SparseSystem::new(5);
        sys.push([(0, BigInt::from(1)), (2, BigInt::from(-1))]);
        sys.push([(2, BigInt::from(2)), (0, BigInt::from(-2))]);
        sys.push([(1, BigInt::from(3)), (3, BigInt::from(1))]);
        let ns = sys.nullspace();
        // x0 = x2, x3 = -3 x1, x4 free
        assert_eq!(ns.len(), 3);
        let dense = rm(&[&[1, 0, -1, 0, 0], &[0, 3, 0, 1, 0]]);
        assert_eq!(nullspace(&dense, 5).len(), 3);
        for v in &ns {
            let mut full = vec![int(0); 5];
            for (c, x) in v {
                full[*c] = x.clone();
            }
            for row in &dense {
                let s: ExactRational = row.iter().zip(&full).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer_vector(&[rat(-1, 2), rat(3, 4), int(0)]);
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }
}
