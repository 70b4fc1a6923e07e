// Every family builds, acts freely, and has the holonomy the construction
// predicts.

use flatcusp::bieberbach::{
    generate_group, has_fixed_point, product, verify_flat_manifold, AffineTorusIsometry, FlatManifoldPresentation,
    HolonomyData, IntMatrix,
};
use flatcusp::constructions::*;
use flatcusp::exactnum::{smith_normal_form, ExactRational};
use flatcusp::Error;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

fn check(p: &FlatManifoldPresentation, dim: usize, order: usize, b1: usize, orientable: bool) -> HolonomyData {
    assert_eq!(p.dim, dim, "{}", p.label);
    let h = verify_flat_manifold(p).unwrap_or_else(|e| panic!("{}: {e}", p.label));
    assert_eq!((h.order, h.b1, h.orientable), (order, b1, orientable), "{}", p.label);
    h
}

/// Grid search for a fixed point on the (1/N) lattice.
fn grid_fixed_point(g: &AffineTorusIsometry) -> bool {
    let n = g.dim();
    let a = g.linear().to_dense();
    let m: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| BigInt::from(a[i][j] - (i == j) as i64)).collect()).collect();
    let dmax = smith_normal_form(&m)
        .diagonal()
        .into_iter()
        .filter(|d| !d.is_zero())
        .map(|d| d.abs())
        .max()
        .unwrap_or_else(BigInt::one);
    let big_n = g.translation().den() * i64::try_from(dmax).unwrap();
    let t = g.translation().to_rationals();
    let mut x = vec![0i64; n];
    loop {
        let ok = (0..n).all(|i| {
            let ax: ExactRational = (0..n).map(|j| ExactRational::new((a[i][j] * x[j]).into(), big_n.into())).sum();
            (ax + &t[i] - ExactRational::new(x[i].into(), big_n.into())).is_integer()
        });
        if ok {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            x[i] += 1;
            if x[i] < big_n {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn hantzsche_wendt_and_tau() {
    let hw = hantzsche_wendt();
    check(&hw, 3, 4, 0, true);
    let group = generate_group(3, &hw.generators).unwrap();
    assert_eq!(group.len(), 4);
    let cover = CoverData { base: hw.clone(), subgroup: hw.generators.clone(), deck: hw_tau(), degree: 3 };
    assert!(cover.deck_normalizes().unwrap());
}

#[test]
fn hw_extensions() {
    assert_eq!(hw_extension(1, 1, 1).unwrap().generators, hantzsche_wendt().generators);
    for n in 4..=9 {
        check(&hw_extension(n - 3, 2, 1).unwrap(), n, 4, 0, false);
    }
    for n in (5..=9).step_by(2) {
        check(&hw_extension(n - 2, 1, 1).unwrap(), n, 4, 0, true);
    }
    for n in (6..=10).step_by(2) {
        check(&hw_extension(n - 4, 2, 2).unwrap(), n, 4, 0, true);
    }
    check(&hw_extension(2, 1, 1).unwrap(), 4, 4, 0, false);
    check(&hw_extension(3, 1, 1).unwrap(), 5, 4, 0, true);
    assert!(hw_extension(0, 1, 1).is_err());
}

#[test]
fn double_covers() {
    let hw = hantzsche_wendt();
    let covers = all_double_covers(&hw).unwrap();
    assert_eq!(covers.len(), 3);
    for c in &covers {
        assert!(c.cover_is_orientable());
        assert!(c.deck_normalizes().unwrap());
        let h = verify_flat_manifold(&c.cover()).unwrap();
        assert_eq!(h.order, 2);
    }
    assert_eq!(find_double_cover(&hw, false).unwrap_err(), Error::NoSuchCover);
    let b = hw_extension(1, 2, 1).unwrap();
    let c = find_double_cover(&b, true).unwrap();
    assert!(verify_flat_manifold(&c.cover()).unwrap().orientable);
    // sending only one generator of a Z_2 x Z_2 to 1 is fine, the kernel has order 2
    assert_eq!(generate_group(3, &double_cover(&hw, &[1, 0]).unwrap().subgroup).unwrap().len(), 2);
}

#[test]
fn c_family() {
    check(&build_c(3).unwrap(), 6, 16, 0, false);
    check(&build_c(4).unwrap(), 8, 16, 0, false);
    for k in 5..=10 {
        check(&build_c(k).unwrap(), 2 * k, 16, 0, true);
    }
    // a second admissible base gives the same holonomy data
    check(&build_c_choice(5, 1).unwrap(), 10, 16, 0, true);
    assert!(build_c(2).is_err());
}

#[test]
fn e_family() {
    for k in 3..=5 {
        let e = build_e(k).unwrap();
        check(&e.base, 4 * k, 128, 0, true);
        check(&e.cover(), 4 * k, 64, 0, true);
        assert!(e.deck_normalizes().unwrap());
        // i^2 is the diagonal deck action of the base cover, and is free
        let i = e.subgroup.last().unwrap();
        let i2 = i.power(2).unwrap();
        assert!(!has_fixed_point(&i2));
        let blocks: Vec<_> = (0..4).map(|s| s * k..(s + 1) * k).collect();
        for (s, b) in blocks.iter().enumerate() {
            for r in b.clone() {
                for c in 0..4 * k {
                    if !b.contains(&c) {
                        assert_eq!(i2.linear().get(r, c), 0, "slot {s}");
                    }
                }
            }
        }
    }
    check(&build_e_choice(3, 1).unwrap().base, 12, 128, 0, true);
}

#[test]
fn c3_family() {
    let a = IntMatrix::from_dense(&[vec![0, -1], vec![1, -1]]).unwrap();
    assert!(a.mul(&a).unwrap().mul(&a).unwrap().is_identity());
    let w = build_wtc3(0).unwrap();
    check(&w, 10, 9, 0, true);
    let group = generate_group(10, &w.generators).unwrap();
    assert_eq!(group.len(), 9);
    assert_eq!(group.iter().filter(|g| !g.is_identity() && !has_fixed_point(g)).count(), 8);
    let c = build_c3_full(0).unwrap();
    assert_eq!(generate_group(10, &c.base.generators).unwrap().len(), 27);
    check(&c.base, 10, 27, 0, true);
    assert!(c.deck.power(3).unwrap().is_identity());
    assert!(c.deck_normalizes().unwrap());
    for m in [2, 4, 6] {
        check(&build_wtc3(m).unwrap(), 10 + m, 9, 0, true);
        check(&build_c3_full(m).unwrap().base, 10 + m, 27, 0, true);
    }
}

#[test]
fn mapping_tori() {
    let c7 = companion(&cyclotomic_polynomial(7)).unwrap();
    let c15 = companion(&cyclotomic_polynomial(15)).unwrap();
    let pow = |m: &IntMatrix, k: usize| (1..k).fold(m.clone(), |acc, _| acc.mul(m).unwrap());
    assert!(pow(&c7, 7).is_identity());
    assert!(pow(&c15, 15).is_identity());
    check(&mapping_torus(1, 0).unwrap(), 7, 7, 1, true);
    check(&mapping_torus(2, 0).unwrap(), 13, 7, 1, true);
    check(&mapping_torus(0, 1).unwrap(), 9, 15, 1, true);
    check(&mapping_torus(2, 1).unwrap(), 21, 105, 1, true);
    check(&mapping_torus(3, 1).unwrap(), 27, 105, 1, true);
    assert!(mapping_torus(0, 0).is_err());
}

#[test]
fn products_and_specs() {
    let s1 = FlatManifoldPresentation::torus(1);
    let p = product(&s1, &build_e(3).unwrap().base);
    check(&p, 13, 128, 1, true);
    let spec: FamilySpec = "product:(C:k=3, wtC3:0)".parse().unwrap();
    check(&spec.build().unwrap(), 16, 144, 0, false);
    assert_eq!(spec.build().unwrap().label, "product(C:k=3, wtC3:0)");
}

#[test]
fn fixed_point_test_matches_grid_in_low_dimension() {
    let mut presentations = vec![hantzsche_wendt(), build_c(3).unwrap()];
    for (a, b, c) in [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2), (2, 2, 1), (1, 2, 2), (3, 1, 1), (2, 2, 2)] {
        presentations.push(hw_extension(a, b, c).unwrap());
    }
    for c in all_double_covers(&hw_extension(1, 2, 1).unwrap()).unwrap() {
        presentations.push(c.cover());
    }
    for p in &presentations {
        assert!(p.dim <= 6);
        let group = generate_group(p.dim, &p.generators).unwrap();
        for g in &group {
            assert_eq!(has_fixed_point(g), grid_fixed_point(g), "{}: {g:?}", p.label);
        }
        // torsion candidates only: every non-identity element of a free action lacks fixed points
        assert!(group.iter().filter(|g| !g.is_identity()).all(|g| !has_fixed_point(g)));
    }
    // an element that does fix points, checked by both
    let rot = AffineTorusIsometry::linear_only(IntMatrix::diagonal(&[-1, 1, -1]).unwrap()).unwrap();
    assert!(has_fixed_point(&rot) && grid_fixed_point(&rot));
}

#[test]
fn ep_family() {
    let p = build_ep(0).unwrap();
    let h = check(&p, 32, 64 * 81 * 2, 0, true);
    assert_eq!(h.group_order, 64 * 81 * 2);
    let s = p.generators.last().unwrap();
    let s2 = s.power(2).unwrap();
    assert!(!has_fixed_point(&s2));
}

#[test]
fn f_family() {
    let p = build_f(0, 0).unwrap();
    let h = check(&p, 35, 124416, 0, true);
    assert_eq!(h.group_order, 124416);
    let g = p.generators.last().unwrap();
    for k in 1..6 {
        assert!(!has_fixed_point(&g.power(k).unwrap()), "g^{k}");
    }
    let g6 = g.power(6).unwrap();
    let base: std::collections::HashSet<_> = generate_group(35, &p.generators[..p.generators.len() - 1])
        .unwrap()
        .into_iter()
        .collect();
    assert!(base.contains(&g6));
}
