use crate::bieberbach::IntMatrix;
use crate::error::Result;

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        p = exact_divide(&p, &cyclotomic_polynomial(d));
    }
    p
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let (dn, dd) = (r.len() - 1, den.len() - 1);
    let lead = *den.last().unwrap();
    let mut q = vec![0i64; dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let c = r[i + dd] / lead;
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            r[i + j] -= c * dj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Companion matrix of a monic polynomial: e_i -> e_{i+1}, e_last -> -sum c_i e_i.
pub fn companion(poly: &[i64]) -> Result<IntMatrix> {
    let d = poly.len() - 1;
    let mut m = vec![vec![0i64; d]; d];
    for i in 1..d {
        m[i][i - 1] = 1;
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[d - 1] = -poly[i];
    }
    IntMatrix::from_dense(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(m: &IntMatrix, bound: usize) -> Option<usize> {
        let mut acc = m.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.mul(m).unwrap();
        }
        None
    }

    #[test]
    fn known_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(7), vec![1; 7]);
        assert_eq!(cyclotomic_polynomial(15), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn companion_orders() {
        assert_eq!(order(&companion(&cyclotomic_polynomial(7)).unwrap(), 100), Some(7));
        assert_eq!(order(&companion(&cyclotomic_polynomial(15)).unwrap(), 100), Some(15));
        assert_eq!(order(&companion(&cyclotomic_polynomial(3)).unwrap(), 100), Some(3));
    }
}
