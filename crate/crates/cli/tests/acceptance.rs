// Acceptance suite: one PASS/FAIL line per criterion, exact checks only.
// Runs without the libtest harness so the lines print in order.

use std::time::{Duration, Instant};

use flatcusp::bieberbach::verify_flat_manifold;
use flatcusp::classify::*;
use flatcusp::constructions::{build_e, hantzsche_wendt, FamilySpec};
use flatcusp::exactnum::{hilbert_symbol, ExactRational, Place};
use flatcusp::qform::{direct_sum, projectively_equivalent, rationally_equivalent, QuadForm};
use flatcusp_cli::selftest::{decider_agreement, footnote, product_formula, sum_of_forms, SuiteResult};
use flatcusp_cli::table::{table_rows, Status, TableKind, FOOTER};
use flatcusp_cli::RunConfig;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn build(spec: &str) -> Result<flatcusp::bieberbach::FlatManifoldPresentation, String> {
    spec.parse::<FamilySpec>().and_then(|s| s.build()).map_err(err)
}

fn suite(r: flatcusp::Result<SuiteResult>) -> Check {
    let r = r.map_err(err)?;
    ensure(r.passed(), format!("{}: {} of {} cases failed", r.name, r.failures, r.cases))?;
    Ok(format!("{} cases", r.cases))
}

/// Primitive solution of z^2 = a x^2 + b y^2 modulo 32 or p^3.
fn brute_hilbert(a: i64, b: i64, p: i64) -> i8 {
    let m = if p == 2 { 32 } else { p * p * p };
    let mut square = vec![false; m as usize];
    for z in 0..m {
        square[(z * z % m) as usize] = true;
    }
    let (a, b) = (a.rem_euclid(m), b.rem_euclid(m));
    for x in 0..m {
        for y in 0..m {
            if (x % p != 0 || y % p != 0) && square[((a * (x * x % m) + b * (y * y % m)) % m) as usize] {
                return 1;
            }
        }
    }
    -1
}

fn squarefree(v: i64) -> bool {
    (2..=5i64).all(|p| v % (p * p) != 0)
}

fn int(v: i64) -> ExactRational {
    ExactRational::from_integer(v.into())
}

fn c1() -> Check {
    let vals: Vec<i64> = (-30i64..=30).filter(|&v| v != 0 && squarefree(v)).collect();
    let mut n = 0;
    for &a in &vals {
        for &b in &vals {
            for p in [2i64, 3, 5, 7] {
                let got = hilbert_symbol(&int(a), &int(b), &Place::prime(p as u64)).map_err(err)?;
                ensure(got == brute_hilbert(a, b, p), format!("({a},{b})_{p}"))?;
                n += 1;
            }
        }
    }
    // Non-squarefree entries reduce to the squarefree grid.
    for (a, b, ra, rb) in [(12, -18, 3, -2), (-50, 28, -2, 7), (9, 7, 1, 7)] {
        for p in [2u64, 3, 5, 7] {
            let x = hilbert_symbol(&int(a), &int(b), &Place::prime(p)).map_err(err)?;
            let y = hilbert_symbol(&int(ra), &int(rb), &Place::prime(p)).map_err(err)?;
            ensure(x == y, format!("({a},{b})_{p} vs ({ra},{rb})_{p}"))?;
        }
    }
    let pf = suite(product_formula(&mut ChaCha8Rng::seed_from_u64(1), 1000, hilbert_symbol))?;
    Ok(format!("{n} grid symbols; product formula {pf}"))
}

fn c2() -> Check {
    suite(sum_of_forms(&mut ChaCha8Rng::seed_from_u64(2), 500, hilbert_symbol))
}

fn c3() -> Check {
    suite(footnote(&[2, 3, 5, 6, 7, 30]))
}

fn c4() -> Check {
    suite(decider_agreement(&mut ChaCha8Rng::seed_from_u64(4), 200))
}

fn opts(samples: usize) -> ClassifyOptions {
    ClassifyOptions { samples, ..ClassifyOptions::default() }
}

fn c5() -> Check {
    let p = hantzsche_wendt();
    let h = verify_flat_manifold(&p).map_err(err)?;
    // (Z2)^2: order 4 with every element an involution.
    let involutions = h.elements.iter().all(|a| a.mul(a).map(|s| s.is_identity()).unwrap_or(false));
    ensure(h.order == 4 && involutions, "holonomy is not (Z2)^2")?;
    ensure(h.b1 == 0 && h.orientable, "b1 or orientation")?;
    let r = classify_verified(&p, h, &ClassifyOptions { samples: 100, resample: false, ..Default::default() })
        .map_err(err)?;
    ensure(r.invariant_space_dim == 3, format!("space dim {}", r.invariant_space_dim))?;
    ensure(r.classes.len() >= 2, "only one class")?;
    Ok(format!("{} classes, space dim 3", r.classes.len()))
}

fn c6() -> Check {
    let r = enumerate_classes_with(&build("wtC3:0")?, &opts(200)).map_err(err)?;
    let rs = r.resample.as_ref().ok_or("no resample")?;
    ensure(r.classes.len() == 1 && rs.classes == 1 && rs.stable, format!("{} classes", r.classes.len()))?;
    let c = &r.classes[0];
    ensure(c.disc.to_string() == "3", format!("disc {}", c.disc))?;
    ensure(c.eps_at(7) == 1 && c.eps_at(13) == 1, "eps_7 or eps_13")?;
    // eps_2 moves under scaling by 2 here, so it is read off the member of
    // the class named by the target form.
    let mut d = vec![1i64; 10];
    d[0] = 3;
    let member = QuadForm::from_ints(&d).map_err(err)?;
    ensure(projectively_equivalent(&c.representative, &member).map_err(err)?, "class misses <3,1,...,1>")?;
    let fp = member.fingerprint().map_err(err)?;
    ensure(fp.eps(&BigInt::from(2)) == 1, "eps_2 of <3,1,...,1>")?;
    let target = target_form_single(3, 10).map_err(err)?;
    ensure(ucc_verdict(&r, &target).map_err(err)?, "realization")?;
    Ok(format!("1 class over seeds 1, 2; realized by {}", diagonal_label(&target)))
}

fn all_samples(spec: &str, count: usize, seed: u64, check: impl Fn(&QuadForm) -> Result<(), String>) -> Result<(), String> {
    let p = build(spec)?;
    let h = verify_flat_manifold(&p).map_err(err)?;
    let space = invariant_form_space(&p, &h).map_err(err)?;
    for f in sample_holonomy_forms(&space, count, seed).map_err(err)? {
        check(&f)?;
    }
    Ok(())
}

fn c7() -> Check {
    for (spec, orientable) in [("C:k=3", false), ("C:k=5", true)] {
        let h = verify_flat_manifold(&build(spec)?).map_err(err)?;
        ensure(h.orientable == orientable, format!("{spec} orientation"))?;
        all_samples(spec, 200, 1, |f| {
            let fp = f.fingerprint().map_err(err)?;
            ensure(fp.disc.is_one(), format!("{spec} disc {}", fp.disc))?;
            ensure(fp.eps(&BigInt::from(5)) == 1 && fp.eps(&BigInt::from(13)) == 1, format!("{spec} eps"))
        })?;
    }
    let r = enumerate_classes_with(&build("C:k=5")?, &opts(200)).map_err(err)?;
    ensure(r.ucc_candidate, format!("C:k=5 has {} classes", r.classes.len()))?;
    Ok("200 samples each".into())
}

fn c8() -> Check {
    let e = build_e(3).map_err(err)?;
    ensure(verify_flat_manifold(&e.cover()).map_err(err)?.b1 == 0, "cover b1")?;
    let r = enumerate_classes_with(&e.base, &opts(200)).map_err(err)?;
    ensure(r.holonomy.orientable && r.ucc_candidate, format!("{} classes", r.classes.len()))?;
    let c = &r.classes[0];
    ensure(c.disc.is_one() && c.eps.values().all(|&v| v == 1), "disc or eps")?;
    all_samples("E:k=3", 200, 1, |f| {
        let h = f.restrict(&[0, 1, 2]).map_err(err)?;
        let h4 = direct_sum(&direct_sum(&h, &h), &direct_sum(&h, &h));
        ensure(rationally_equivalent(f, &h4).map_err(err)?, "sample is not h+h+h+h")
    })?;
    Ok("1 class, 200 samples split as h+h+h+h".into())
}

fn c9() -> Check {
    all_samples("product(S1,E:k=3)", 200, 1, |f| {
        let fp = f.fingerprint().map_err(err)?;
        ensure(fp.prime_set().primes().iter().all(|q| fp.eps(q) == 1), "eps = -1 somewhere")
    })?;
    Ok("200 samples".into())
}

fn c10() -> Check {
    let mut out = Vec::new();
    for (k, l, n) in [(1, 0, 7u64), (0, 1, 9), (2, 0, 13), (3, 0, 19), (1, 1, 15), (2, 1, 21)] {
        let expected: i8 = if (n * n - 1) / 8 % 2 == 0 { 1 } else { -1 };
        let got = mapping_torus_fingerprint(k, l, 50, 1).map_err(err)?;
        ensure(got == expected, format!("M({k},{l}) gave {got}, expected {expected}"))?;
        out.push(format!("n={n}:{got:+}"));
    }
    Ok(out.join(" "))
}

fn pair(a: &str, b: &str, samples: usize) -> Result<PairReport, String> {
    let o = ClassifyOptions { samples, resample: false, ..Default::default() };
    let ra = enumerate_classes_with(&build(a)?, &o).map_err(err)?;
    let rb = enumerate_classes_with(&build(b)?, &ClassifyOptions { seed: 2, ..o }).map_err(err)?;
    pair_verdict(&ra, &rb).map_err(err)
}

fn c11() -> Check {
    let mut out = Vec::new();
    for (a, b, want) in [
        ("wtC3:0", "C:k=5", PairVerdict::Disjoint),
        ("mt:k=2,l=0", "product(S1,E:k=3)", PairVerdict::Disjoint),
        ("mt:k=3,l=0", "product(mt:k=1,l=0,E:k=3)", PairVerdict::Disjoint),
        ("hw", "hw", PairVerdict::Overlapping),
    ] {
        let r = pair(a, b, 100)?;
        ensure(r.verdict == want, format!("{a} / {b}: {}", r.verdict))?;
        out.push(format!("n={}: {}", r.dim, r.separator.unwrap_or_else(|| r.verdict.to_string())));
    }
    Ok(out.join("; "))
}

// (3,3)_q = (3,-1)_q: -1 at 2 and 3, +1 at 5 and 7.
const H33: [(u64, i8); 4] = [(2, -1), (3, -1), (5, 1), (7, 1)];

fn c12() -> Check {
    let r = enumerate_classes_with(&build("F:k=0,l=0")?, &opts(50)).map_err(err)?;
    ensure(r.dim == 35 && r.holonomy.orientable, "dim or orientation")?;
    ensure(r.ucc_candidate && r.resample.as_ref().is_some_and(|s| s.stable), format!("{} classes", r.classes.len()))?;
    let f = &r.classes[0].representative;
    for (q, want) in H33 {
        let got = twisted_eps(f, &BigInt::from(q)).map_err(err)?;
        ensure(got == want, format!("twisted eps_{q} = {got}"))?;
    }
    Ok("1 class in 50 samples".into())
}

fn c13() -> Check {
    let r = enumerate_classes_with(&build("Ep:k=0")?, &opts(50)).map_err(err)?;
    ensure(r.dim == 32 && r.ucc_candidate, format!("{} classes", r.classes.len()))?;
    let c = &r.classes[0];
    ensure(c.disc.is_one(), format!("disc {}", c.disc))?;
    for (q, want) in H33 {
        ensure(c.eps_at(q) == want, format!("eps_{q}"))?;
    }
    let target = target_form_double(3, 32).map_err(err)?;
    ensure(ucc_verdict(&r, &target).map_err(err)?, "realization")?;
    Ok(format!("1 class; realized by {}", diagonal_label(&target)))
}

fn c14() -> Check {
    let cfg = RunConfig::default();
    let mut counts = (0, 0);
    for which in [TableKind::Ucc, TableKind::Pairs] {
        for row in table_rows(which, &cfg).map_err(err)? {
            match row.status {
                Status::Pass => counts.0 += 1,
                Status::Skipped if !row.note.is_empty() => counts.1 += 1,
                _ => return Err(format!("{}: {:?} {}", row.construction, row.status, row.note)),
            }
        }
    }
    ensure(FOOTER.contains("not reproduced"), "footer")?;
    Ok(format!("{} rows PASS, {} SKIPPED", counts.0, counts.1))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Check); 14] = [
        (1, "Hilbert symbols vs brute force, product formula", Duration::from_secs(10), c1),
        (2, "sum-of-forms identity", Duration::from_secs(5), c2),
        (3, "<m,-m> ~ <1,-1>", Duration::from_secs(1), c3),
        (4, "projective decider agreement", Duration::from_secs(30), c4),
        (5, "Hantzsche-Wendt is not UCC", Duration::from_secs(5), c5),
        (6, "wtC3(0) single class, realized", Duration::from_secs(60), c6),
        (7, "C(3), C(5) invariants", Duration::from_secs(60), c7),
        (8, "E(3) single class, h+h+h+h", Duration::from_secs(120), c8),
        (9, "S1 x E(3) has trivial eps", Duration::from_secs(60), c9),
        (10, "mapping-torus twisted eps_2", Duration::from_secs(120), c10),
        (11, "non-arithmetic pairs", Duration::from_secs(300), c11),
        (12, "F(0,0) dim 35", Duration::from_secs(1200), c12),
        (13, "Ep(0) dim 32, realized", Duration::from_secs(900), c13),
        (14, "tables", Duration::from_secs(600), c14),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let t = Instant::now();
        let result = run();
        let took = t.elapsed();
        let (status, detail) = match result {
            Ok(d) if took <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget {budget:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {id:>2} {status} [{:.1}s] {name}: {detail}", took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
