use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bieberbach::{FlatManifoldPresentation, HolonomyData, IntMatrix};
use crate::error::{Error, Result};
use crate::exactnum::linalg::{primitive_integer_vector, RatMatrix, SparseSystem};
use crate::exactnum::rational::ExactRational;

/// The rational symmetric matrices preserved by a holonomy representation.
#[derive(Debug, Clone)]
pub struct InvariantFormSpace {
    pub dim: usize,
    /// Primitive integer matrices spanning the space.
    pub basis: Vec<RatMatrix>,
    /// Sum of A^T A over the holonomy, divided by its content.
    pub averaged: RatMatrix,
}

fn sym_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

/// Solves A^T F A = F for every generator's linear part. The generators
/// suffice since they generate the holonomy; `h` supplies the full group for
/// the averaged form.
pub fn invariant_form_space(p: &FlatManifoldPresentation, h: &HolonomyData) -> Result<InvariantFormSpace> {
    let gens: Vec<&IntMatrix> = p.generators.iter().map(|g| g.linear()).collect();
    invariant_form_space_of(p.dim, &gens, &h.elements)
}

pub fn invariant_form_space_of(n: usize, gens: &[&IntMatrix], group: &[IntMatrix]) -> Result<InvariantFormSpace> {
    let unknowns = n * (n + 1) / 2;
    let mut sys = SparseSystem::new(unknowns);
    for a in gens {
        if a.dim() != n {
            return Err(Error::DimensionMismatch(n, a.dim()));
        }
        if a.is_identity() {
            continue;
        }
        let at = a.transpose();
        for i in 0..n {
            for j in i..n {
                let mut terms = vec![(sym_index(n, i, j), BigInt::from(-1))];
                for &(k, x) in at.row(i) {
                    for &(l, y) in at.row(j) {
                        terms.push((sym_index(n, k as usize, l as usize), BigInt::from(x as i64 * y as i64)));
                    }
                }
                sys.push(terms);
            }
        }
    }
    let basis: Vec<RatMatrix> = sys
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut dense = vec![ExactRational::zero(); unknowns];
            for (c, x) in v {
                dense[c] = x;
            }
            let ints = primitive_integer_vector(&dense);
            let mut m = vec![vec![ExactRational::zero(); n]; n];
            for i in 0..n {
                for j in i..n {
                    let x = ExactRational::from_integer(ints[sym_index(n, i, j)].clone());
                    m[i][j] = x.clone();
                    m[j][i] = x;
                }
            }
            m
        })
        .collect();
    let averaged = averaged_form(n, group)?;
    for a in gens {
        if !preserves(a, &averaged) {
            return Err(Error::Assertion("averaged form is not invariant".into()));
        }
    }
    Ok(InvariantFormSpace { dim: n, basis, averaged })
}

fn averaged_form(n: usize, group: &[IntMatrix]) -> Result<RatMatrix> {
    let mut acc = vec![vec![0i128; n]; n];
    if group.is_empty() {
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = 1;
        }
    }
    for a in group {
        // (A^T A)_{ij} = sum_k A_ki A_kj
        for k in 0..n {
            let row = a.row(k);
            for &(i, x) in row {
                for &(j, y) in row {
                    acc[i as usize][j as usize] += x as i128 * y as i128;
                }
            }
        }
    }
    let g = acc.iter().flatten().fold(0i128, |g, &x| g.gcd(&x));
    if g == 0 {
        return Err(Error::Degenerate);
    }
    Ok(acc
        .into_iter()
        .map(|row| row.into_iter().map(|x| ExactRational::from_integer(BigInt::from(x / g))).collect())
        .collect())
}

/// Whether A^T F A = F.
pub fn preserves(a: &IntMatrix, f: &RatMatrix) -> bool {
    let n = a.dim();
    // F A, column-sparse through the rows of A
    let mut fa = vec![vec![ExactRational::zero(); n]; n];
    for (i, fa_row) in fa.iter_mut().enumerate() {
        for k in 0..n {
            if f[i][k].is_zero() {
                continue;
            }
            for &(j, x) in a.row(k) {
                fa_row[j as usize] += &f[i][k] * ExactRational::from_integer(BigInt::from(x));
            }
        }
    }
    let at = a.transpose();
    for i in 0..n {
        for j in 0..n {
            let mut s = ExactRational::zero();
            for &(k, x) in at.row(i) {
                if !fa[k as usize][j].is_zero() {
                    s += &fa[k as usize][j] * ExactRational::from_integer(BigInt::from(x));
                }
            }
            if s != f[i][j] {
                return false;
            }
        }
    }
    true
}

/// Exact positive definiteness: every leading principal minor is positive.
/// The minors are the pivots of fraction-free (Bareiss) elimination on the
/// matrix scaled to integers.
pub fn leading_minors_positive(g: &RatMatrix) -> bool {
    let n = g.len();
    let l = g.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut a: Vec<Vec<BigInt>> = g
        .iter()
        .map(|row| row.iter().map(|x| x.numer() * (&l / x.denom())).collect())
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return false;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in k + 1..n {
                let v = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot_row[k].clone();
    }
    true
}
