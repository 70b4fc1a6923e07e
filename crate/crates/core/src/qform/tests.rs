use num_bigint::BigInt;

use super::*;
use crate::error::Error;
use crate::exactnum::rational::{int, rat};
use crate::exactnum::{squarefree_part, ExactRational, Place};

fn diag(v: &[i64]) -> QuadForm {
    QuadForm::from_ints(v).unwrap()
}

fn prime(p: u64) -> Place {
    Place::prime(p)
}

fn classes(f: &QuadForm) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = f.diagonalize().iter().map(|a| squarefree_part(a).unwrap().value().clone()).collect();
    v.sort();
    v
}

#[test]
fn hyperbolic_plane_diagonalizes_to_one_minus_one() {
    let h = QuadForm::new(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
    assert_eq!(classes(&h), vec![BigInt::from(-1), BigInt::from(1)]);
    assert_eq!(QuadForm::identity(4).diagonalize(), &[int(1), int(1), int(1), int(1)]);
    assert_eq!(diag(&[3, 5]).diagonalize(), &[int(3), int(5)]);
}

#[test]
fn rejects_bad_input() {
    let sing = QuadForm::new(vec![vec![int(1), int(1)], vec![int(1), int(1)]]);
    assert_eq!(sing.unwrap_err(), Error::Degenerate);
    let asym = QuadForm::new(vec![vec![int(1), int(2)], vec![int(1), int(1)]]);
    assert_eq!(asym.unwrap_err(), Error::NotSymmetric);
}

#[test]
fn discriminant_examples() {
    assert_eq!(discriminant(&diag(&[3, 3, 3, 1, 1, 1])).unwrap().value(), &BigInt::from(3));
    assert_eq!(discriminant(&QuadForm::hyperbolic_plane()).unwrap().value(), &BigInt::from(-1));
}

#[test]
fn hasse_witt_examples() {
    for n in [2usize, 4, 6, 8, 10, 12, 14, 16] {
        let mut v = vec![1i64; n / 2];
        v.extend(vec![-1i64; n / 2]);
        let expected = if (n * (n - 2) / 8) % 2 == 0 { 1 } else { -1 };
        assert_eq!(hasse_witt(&diag(&v), &prime(2)), expected, "n = {n}");
    }
    assert_eq!(hasse_witt(&diag(&[3, 3]), &prime(2)), -1);
    for p in [2, 3, 5, 7, 11] {
        assert_eq!(hasse_witt(&QuadForm::identity(7), &prime(p)), 1);
    }
}

#[test]
fn direct_sum_examples() {
    let s = direct_sum(&diag(&[3]), &diag(&[3]));
    assert_eq!(s, diag(&[3, 3]));
    let fp = s.fingerprint().unwrap();
    assert!(fp.disc.is_one());
    assert_eq!(fp.eps(&BigInt::from(2)), -1);
    let empty = QuadForm::new(vec![]).unwrap();
    let f = diag(&[2, 5, 7]);
    assert_eq!(direct_sum(&f, &empty), f);
    let h = direct_sum(&diag(&[1]), &diag(&[-1]));
    assert_eq!(h.fingerprint().unwrap().disc.value(), &BigInt::from(-1));
    assert!(h.fingerprint().unwrap().minus_primes().is_empty());
}

#[test]
fn rational_equivalence_examples() {
    assert!(rationally_equivalent(&diag(&[5, -5]), &QuadForm::hyperbolic_plane()).unwrap());
    let f = diag(&[2, 3, 7]);
    assert!(rationally_equivalent(&f, &f).unwrap());
    assert!(!rationally_equivalent(&diag(&[1, 1]), &diag(&[3, 3])).unwrap());
    // x^2 + y^2 represents 2: <1,1> ~ <2,2>
    assert!(rationally_equivalent(&diag(&[1, 1]), &diag(&[2, 2])).unwrap());
}

#[test]
fn projective_examples() {
    assert!(projectively_equivalent(&diag(&[1, 1]), &diag(&[3, 3])).unwrap());
    assert_eq!(projective_scaling(&diag(&[1, 1]), &diag(&[3, 3])).unwrap(), Some(BigInt::from(3)));
    assert!(!projectively_equivalent(&diag(&[1, 1]), &diag(&[1, 3])).unwrap());
    assert_eq!(
        projectively_equivalent(&diag(&[1, 1]), &diag(&[1, 1, 1])),
        Err(Error::DimensionMismatch(2, 3))
    );
}

// <5, 70> and <7, 2> are 5<1, 14> and 7<1, 14>; 35 scales one to the other,
// and every scaling needs a prime dividing neither determinant.
#[test]
fn scaling_may_need_primes_outside_the_forms() {
    let f = QuadForm::new(vec![vec![int(5), int(1)], vec![int(1), int(3)]]).unwrap();
    let g = QuadForm::diagonal_form(&[int(7), rat(1, 2)]).unwrap();
    let m = projective_scaling(&f, &g).unwrap().expect("equivalent");
    let mf = f.scaled(&ExactRational::from_integer(m.clone())).unwrap();
    assert!(rationally_equivalent(&mf, &g).unwrap());
    let mut rest = m;
    for p in [2, 7] {
        if &rest % p == BigInt::from(0) {
            rest /= p;
        }
    }
    assert!(rest > BigInt::from(1));
    assert!(projectively_equivalent(&f, &g).unwrap());
}

/// The n = 2 mod 8 forms p x1^2 + x2^2 + ... + x_{n+1}^2 - x_{n+2}^2.
fn three_mod_four_form(p: i64, n: usize) -> QuadForm {
    let mut v = vec![p];
    v.extend(vec![1; n]);
    v.push(-1);
    diag(&v)
}

#[test]
fn distinct_primes_give_inequivalent_forms() {
    for n in [10usize, 18] {
        let (q3, q7) = (three_mod_four_form(3, n), three_mod_four_form(7, n));
        assert!(!projectively_equivalent(&q3, &q7).unwrap());
        assert!(projectively_equivalent(&q3, &q3.scaled(&int(11)).unwrap()).unwrap());
    }
}

#[test]
fn realization_examples() {
    let mut f = vec![3i64];
    f.extend(vec![1; 9]);
    let f = diag(&f);
    let q = three_mod_four_form(3, 10);
    assert!(realization_test(&f, &q).unwrap());
    let mut v = vec![1i64; 11];
    v.push(-1);
    assert!(realization_test(&QuadForm::identity(10), &diag(&v)).unwrap());
    assert!(!realization_test(&QuadForm::identity(10), &q).unwrap());
    assert!(matches!(realization_test(&QuadForm::identity(3), &q), Err(Error::Signature { .. })));
}

#[test]
fn gf2_solver_matches_enumeration() {
    // x0 + x1 = 1, x1 + x2 = 0, x0 + x2 = 1
    let mut rows = vec![vec![1, 1, 0, 1], vec![0, 1, 1, 0], vec![1, 0, 1, 1]];
    let s = super::projective::solve_gf2(&mut rows, 3).unwrap();
    assert_eq!((s[0] ^ s[1], s[1] ^ s[2], s[0] ^ s[2]), (1, 0, 1));
    let mut bad = vec![vec![1, 1, 1], vec![1, 1, 0]];
    assert!(super::projective::solve_gf2(&mut bad, 2).is_none());
}

#[test]
fn json_round_trip() {
    let f = QuadForm::new(vec![vec![rat(1, 2), int(1)], vec![int(1), int(-3)]]).unwrap();
    let s = serde_json::to_string(&f).unwrap();
    assert_eq!(s, r#"{"dim":2,"gram":[["1/2","1"],["1","-3"]]}"#);
    let back: QuadForm = serde_json::from_str(&s).unwrap();
    assert_eq!(back, f);
    let fp = serde_json::to_value(diag(&[3, 3]).fingerprint().unwrap()).unwrap();
    assert_eq!(fp["disc"], serde_json::json!(1));
    assert_eq!(fp["eps"]["2"], serde_json::json!(-1));
    let _: ExactRational = rat(1, 1);
}
