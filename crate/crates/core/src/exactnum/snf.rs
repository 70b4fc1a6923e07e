//! Smith normal form over Z and integer solvability of linear systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};

use super::rational::ExactRational;

/// U * M * V = D with U, V unimodular and D diagonal with d1 | d2 | ...
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let r = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..r).map(|i| self.d[i][i].clone()).collect()
    }
}

trait SnfInt: Clone + Integer + Signed + CheckedMul + CheckedAdd + CheckedSub {}
impl<T: Clone + Integer + Signed + CheckedMul + CheckedAdd + CheckedSub> SnfInt for T {}

fn identity<T: SnfInt>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

// row_i <- row_i - q * row_j
fn row_axpy<T: SnfInt>(m: &mut [Vec<T>], i: usize, j: usize, q: &T) -> Option<()> {
    let (src, dst) = if i < j {
        let (a, b) = m.split_at_mut(j);
        (&b[0], &mut a[i])
    } else {
        let (a, b) = m.split_at_mut(i);
        (&a[j], &mut b[0])
    };
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        if !s.is_zero() {
            *d = d.checked_sub(&s.checked_mul(q)?)?;
        }
    }
    Some(())
}

fn col_axpy<T: SnfInt>(m: &mut [Vec<T>], i: usize, j: usize, q: &T) -> Option<()> {
    for row in m.iter_mut() {
        if !row[j].is_zero() {
            let t = row[j].checked_mul(q)?;
            row[i] = row[i].checked_sub(&t)?;
        }
    }
    Some(())
}

fn swap_cols<T>(m: &mut [Vec<T>], i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

fn snf_generic<T: SnfInt>(m: &[Vec<T>], cols: usize) -> Option<(Vec<Vec<T>>, Vec<Vec<T>>, Vec<Vec<T>>)> {
    let rows = m.len();
    let mut d: Vec<Vec<T>> = m.to_vec();
    let mut u = identity::<T>(rows);
    let mut v = identity::<T>(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Some((u, d, v));
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let q = d[i][t].div_floor(&d[t][t]);
                    row_axpy(&mut d, i, t, &q)?;
                    row_axpy(&mut u, i, t, &q)?;
                    if !d[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let q = d[t][j].div_floor(&d[t][t]);
                    col_axpy(&mut d, j, t, &q)?;
                    col_axpy(&mut v, j, t, &q)?;
                    if !d[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !d[i][j].is_multiple_of(&d[t][t]) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let minus_one = T::zero() - T::one();
                    row_axpy(&mut d, t, i, &minus_one)?;
                    row_axpy(&mut u, t, i, &minus_one)?;
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = T::zero() - x.clone();
            }
            for x in u[t].iter_mut() {
                *x = T::zero() - x.clone();
            }
        }
    }
    Some((u, d, v))
}

fn to_i128(m: &[Vec<BigInt>]) -> Option<Vec<Vec<i128>>> {
    m.iter()
        .map(|row| row.iter().map(|x| i128::try_from(x).ok()).collect())
        .collect()
}

fn from_i128(m: Vec<Vec<i128>>) -> Vec<Vec<BigInt>> {
    m.into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect()
}

/// Smith normal form of an integer matrix with `cols` columns (needed for
/// matrices with no rows).
pub fn smith_normal_form_cols(m: &[Vec<BigInt>], cols: usize) -> SmithForm {
    if let Some(small) = to_i128(m) {
        if let Some((u, d, v)) = snf_generic(&small, cols) {
            return SmithForm { u: from_i128(u), d: from_i128(d), v: from_i128(v) };
        }
    }
    let (u, d, v) = snf_generic(m, cols).expect("bigint arithmetic cannot overflow");
    SmithForm { u, d, v }
}

pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SmithForm {
    let cols = m.first().map_or(0, Vec::len);
    smith_normal_form_cols(m, cols)
}

/// An integer k with M k = w, if one exists.
pub fn lattice_solve(m: &[Vec<BigInt>], cols: usize, w: &[ExactRational]) -> Option<Vec<BigInt>> {
    assert_eq!(m.len(), w.len());
    let snf = smith_normal_form_cols(m, cols);
    let rows = m.len();
    let uw: Vec<ExactRational> = (0..rows)
        .map(|i| {
            snf.u[i]
                .iter()
                .zip(w)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, x)| x * ExactRational::from_integer(c.clone()))
                .sum()
        })
        .collect();
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..rows {
        let di = if i < cols { snf.d[i][i].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !uw[i].is_zero() {
                return None;
            }
        } else {
            let q = &uw[i] / ExactRational::from_integer(di);
            if !q.is_integer() {
                return None;
            }
            y[i] = q.to_integer();
        }
    }
    Some(
        (0..cols)
            .map(|i| {
                snf.v[i]
                    .iter()
                    .zip(&y)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect(),
    )
}

#[allow(dead_code)]
pub(crate) fn is_unimodular(m: &[Vec<BigInt>]) -> bool {
    let snf = smith_normal_form(m);
    m.len() == m.first().map_or(0, Vec::len) && snf.diagonal().iter().all(One::is_one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn im(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                    .collect()
            })
            .collect()
    }

    fn check(m: &[Vec<BigInt>]) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(mul(&mul(&s.u, m), &s.v), s.d);
        assert!(is_unimodular(&s.u) || s.u.is_empty());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn examples() {
        assert_eq!(check(&im(&[&[2, 0], &[0, 3]])).diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(check(&im(&[&[1, 0], &[0, 1]])).diagonal(), vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(check(&im(&[&[0, 0], &[0, 0]])).diagonal(), vec![BigInt::zero(), BigInt::zero()]);
        check(&im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        check(&im(&[&[0, 3, 0], &[5, 0, 7]]));
    }

    #[test]
    fn solve_examples() {
        let k = lattice_solve(&im(&[&[2, 0], &[0, 3]]), 2, &[int(4), int(9)]).unwrap();
        assert_eq!(k, vec![BigInt::from(2), BigInt::from(3)]);
        assert!(lattice_solve(&im(&[&[1, 0], &[0, 1]]), 2, &[rat(1, 2), int(0)]).is_none());
        let k = lattice_solve(&im(&[&[1, 1], &[1, -1]]), 2, &[int(1), int(1)]).unwrap();
        assert_eq!(k, vec![BigInt::from(1), BigInt::from(0)]);
        // (1,1) has parity obstruction for x+y, x-y = (1,0)
        assert!(lattice_solve(&im(&[&[1, 1], &[1, -1]]), 2, &[int(1), int(0)]).is_none());
    }
}
