use indexmap::{IndexMap, IndexSet};
use num_bigint::BigInt;

use super::cyclotomic::{companion, cyclotomic_polynomial};
use crate::bieberbach::{
    generate_group, toral_extension, AffineTorusIsometry, FlatManifoldPresentation, IntMatrix, TorusVector,
};
use crate::error::{Error, Result};
use crate::exactnum::rational::ExactRational;

fn q(n: i64, d: i64) -> ExactRational {
    ExactRational::new(n.into(), d.into())
}

fn iso(linear: IntMatrix, t: &[ExactRational]) -> Result<AffineTorusIsometry> {
    AffineTorusIsometry::new(linear, TorusVector::from_rationals(t)?)
}

fn is_orientation_preserving(g: &AffineTorusIsometry) -> bool {
    g.linear().det() == BigInt::from(1)
}

/// A finite regular cover: `subgroup` generates the cover's group, `deck`
/// together with it generates the base group.
#[derive(Debug, Clone)]
pub struct CoverData {
    pub base: FlatManifoldPresentation,
    pub subgroup: Vec<AffineTorusIsometry>,
    pub deck: AffineTorusIsometry,
    pub degree: usize,
}

impl CoverData {
    pub fn cover(&self) -> FlatManifoldPresentation {
        FlatManifoldPresentation {
            dim: self.base.dim,
            generators: self.subgroup.clone(),
            label: format!("{}~", self.base.label),
        }
    }

    pub fn cover_is_orientable(&self) -> bool {
        self.subgroup.iter().all(is_orientation_preserving)
    }

    /// deck K = K deck, and deck^degree lies in K.
    pub fn deck_normalizes(&self) -> Result<bool> {
        let k: IndexSet<AffineTorusIsometry> = generate_group(self.base.dim, &self.subgroup)?.into_iter().collect();
        let mut left = IndexSet::new();
        let mut right = IndexSet::new();
        for h in &k {
            left.insert(self.deck.compose(h)?);
            right.insert(h.compose(&self.deck)?);
        }
        let power = self.deck.power(self.degree as u32)?;
        Ok(left.iter().all(|x| right.contains(x)) && k.contains(&power))
    }
}

pub fn hantzsche_wendt() -> FlatManifoldPresentation {
    let gamma = iso(IntMatrix::diagonal(&[-1, -1, 1]).unwrap(), &[q(0, 1), q(1, 2), q(1, 2)]).unwrap();
    let delta = iso(IntMatrix::diagonal(&[1, -1, -1]).unwrap(), &[q(1, 2), q(0, 1), q(1, 2)]).unwrap();
    FlatManifoldPresentation { dim: 3, generators: vec![gamma, delta], label: "hw".into() }
}

/// The coordinate 3-cycle e_i -> e_{i+1}, which normalizes the HW group.
pub fn hw_tau() -> AffineTorusIsometry {
    AffineTorusIsometry::linear_only(IntMatrix::permutation(&[1, 2, 0])).unwrap()
}

/// HW with a_i - 1 extra copies of the character given by the i-th diagonal
/// sign of each generator.
pub fn hw_extension(a1: usize, a2: usize, a3: usize) -> Result<FlatManifoldPresentation> {
    if a1 == 0 || a2 == 0 || a3 == 0 {
        return Err(Error::InvalidParameters("hw_ext multiplicities must be positive".into()));
    }
    let base = hantzsche_wendt();
    let label = format!("hw_ext:{a1},{a2},{a3}");
    if (a1, a2, a3) == (1, 1, 1) {
        return Ok(base.with_label(label));
    }
    let sigma: Vec<IntMatrix> = base
        .generators
        .iter()
        .map(|g| {
            let signs: Vec<i64> = (0..3)
                .flat_map(|c| std::iter::repeat_n(g.linear().get(c, c) as i64, [a1, a2, a3][c] - 1))
                .collect();
            IntMatrix::diagonal(&signs)
        })
        .collect::<Result<_>>()?;
    Ok(toral_extension(&base, &sigma)?.with_label(label))
}

/// Elements of the group with the tag each receives from `epi` (one bit per
/// generator); fails if the tags are not well defined.
fn tagged_group(p: &FlatManifoldPresentation, epi: &[u8], modulus: u8) -> Result<IndexMap<AffineTorusIsometry, u8>> {
    if epi.len() != p.generators.len() {
        return Err(Error::DimensionMismatch(p.generators.len(), epi.len()));
    }
    let group = generate_group(p.dim, &p.generators)?;
    let mut tags: IndexMap<AffineTorusIsometry, u8> = IndexMap::new();
    tags.insert(AffineTorusIsometry::identity(p.dim), 0);
    let mut i = 0;
    while i < tags.len() {
        let (e, t) = tags.get_index(i).map(|(e, t)| (e.clone(), *t)).unwrap();
        for (g, &b) in p.generators.iter().zip(epi) {
            let c = e.compose(g)?;
            let tc = (t + b) % modulus;
            match tags.get(&c) {
                Some(&old) if old != tc => return Err(Error::InconsistentRepresentation),
                Some(_) => {}
                None => {
                    tags.insert(c, tc);
                }
            }
        }
        i += 1;
    }
    debug_assert_eq!(tags.len(), group.len());
    Ok(tags)
}

/// Cover for the kernel of a surjection of the group onto Z_modulus.
pub fn cyclic_cover(p: &FlatManifoldPresentation, epi: &[u8], modulus: u8) -> Result<CoverData> {
    let tags = tagged_group(p, epi, modulus)?;
    let deck = p
        .generators
        .iter()
        .zip(epi)
        .find(|(_, &b)| b % modulus == 1)
        .map(|(g, _)| g.clone())
        .ok_or_else(|| Error::InvalidParameters("homomorphism must send a generator to 1".into()))?;
    // greedy generating set of the kernel, in group order
    let mut subgroup: Vec<AffineTorusIsometry> = Vec::new();
    let mut span: IndexSet<AffineTorusIsometry> = IndexSet::new();
    span.insert(AffineTorusIsometry::identity(p.dim));
    for (e, &t) in &tags {
        if t == 0 && !span.contains(e) {
            subgroup.push(e.clone());
            span = generate_group(p.dim, &subgroup)?.into_iter().collect();
        }
    }
    Ok(CoverData { base: p.clone(), subgroup, deck, degree: modulus as usize })
}

pub fn double_cover(p: &FlatManifoldPresentation, epi: &[u8]) -> Result<CoverData> {
    cyclic_cover(p, epi, 2)
}

/// All double covers, one per surjection onto Z_2 (as generator bit patterns
/// in increasing order).
pub fn all_double_covers(p: &FlatManifoldPresentation) -> Result<Vec<CoverData>> {
    let n = p.generators.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let epi: Vec<u8> = (0..n).map(|i| (mask >> i & 1) as u8).collect();
        match double_cover(p, &epi) {
            Ok(c) => out.push(c),
            Err(Error::InconsistentRepresentation) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// First double cover with the requested orientability.
pub fn find_double_cover(p: &FlatManifoldPresentation, orientable: bool) -> Result<CoverData> {
    all_double_covers(p)?
        .into_iter()
        .find(|c| c.cover_is_orientable() == orientable)
        .ok_or(Error::NoSuchCover)
}

/// Isometry of a product of tori whose slot `t` receives slot `map[t].0`,
/// optionally moved by `map[t].1` (which acts on that slot alone).
pub fn slot_map(dims: &[usize], map: &[(usize, Option<&AffineTorusIsometry>)]) -> Result<AffineTorusIsometry> {
    if map.len() != dims.len() {
        return Err(Error::DimensionMismatch(dims.len(), map.len()));
    }
    let offsets: Vec<usize> = dims.iter().scan(0, |acc, &d| { let o = *acc; *acc += d; Some(o) }).collect();
    let n: usize = dims.iter().sum();
    let mut rows: Vec<Vec<(u32, i32)>> = Vec::with_capacity(n);
    let mut t = TorusVector::zero(0);
    for (target, &(src, g)) in map.iter().enumerate() {
        let d = dims[target];
        if dims[src] != d {
            return Err(Error::DimensionMismatch(d, dims[src]));
        }
        let off = offsets[src] as u32;
        match g {
            Some(g) => {
                if g.dim() != d {
                    return Err(Error::DimensionMismatch(d, g.dim()));
                }
                for i in 0..d {
                    rows.push(g.linear().row(i).iter().map(|&(j, v)| (j + off, v)).collect());
                }
                t = t.concat(g.translation());
            }
            None => {
                for i in 0..d {
                    rows.push(vec![(off + i as u32, 1)]);
                }
                t = t.concat(&TorusVector::zero(d));
            }
        }
    }
    AffineTorusIsometry::new(IntMatrix::from_rows(n, rows), t)
}

/// Generators of each slot placed into a product of tori.
fn slot_generators(dims: &[usize], slots: &[&[AffineTorusIsometry]]) -> Vec<AffineTorusIsometry> {
    let total: usize = dims.iter().sum();
    let mut out = Vec::new();
    let mut off = 0;
    for (d, gens) in dims.iter().zip(slots) {
        out.extend(gens.iter().map(|g| g.embed(off, total - off - d)));
        off += d;
    }
    out
}

/// Triples a1 <= ... in lexicographic order with a1 + a2 + a3 = k.
fn triples(k: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..k).flat_map(move |a1| (1..k).filter_map(move |a2| (a1 + a2 < k).then_some((a1, a2, k - a1 - a2))))
}

/// The base B = hw_ext(a) and an orientable double cover of it, chosen by
/// `accept` from the lexicographically first admissible triple.
fn choose_base(
    k: usize,
    skip: usize,
    accept: impl Fn(&CoverData) -> bool,
) -> Result<((usize, usize, usize), CoverData)> {
    let mut seen = 0;
    for (a1, a2, a3) in triples(k) {
        let b = hw_extension(a1, a2, a3)?;
        for c in all_double_covers(&b)? {
            if c.cover_is_orientable() && accept(&c) {
                if seen == skip {
                    return Ok(((a1, a2, a3), c));
                }
                seen += 1;
            }
        }
    }
    Err(Error::NoSuchCover)
}

/// (x, y) -> (alpha(y), x) on the product of two copies of the cover.
fn swap_with(alpha: &AffineTorusIsometry) -> Result<AffineTorusIsometry> {
    let k = alpha.dim();
    slot_map(&[k, k], &[(1, Some(alpha)), (0, None)])
}

/// The 2k-dimensional manifold C, orientable iff k >= 5.
pub fn build_c(k: usize) -> Result<FlatManifoldPresentation> {
    build_c_choice(k, 0)
}

/// `choice` selects among admissible bases and covers (0 = default).
pub fn build_c_choice(k: usize, choice: usize) -> Result<FlatManifoldPresentation> {
    if k < 3 {
        return Err(Error::InvalidParameters("C needs k >= 3".into()));
    }
    let want = k >= 5;
    let (_, cover) = choose_base(k, choice, |c| {
        // det beta = (-1)^k det(alpha)
        let alpha_pos = is_orientation_preserving(&c.deck);
        (alpha_pos == k.is_multiple_of(2)) == want
    })?;
    let beta = swap_with(&cover.deck)?;
    let mut generators = slot_generators(&[k, k], &[&cover.subgroup, &cover.subgroup]);
    generators.push(beta);
    Ok(FlatManifoldPresentation { dim: 2 * k, generators, label: format!("C:k={k}") })
}

/// E (dim 4k) with its double cover E~ generated by the i-action; the deck is j.
pub fn build_e(k: usize) -> Result<CoverData> {
    build_e_choice(k, 0)
}

pub fn build_e_choice(k: usize, choice: usize) -> Result<CoverData> {
    if k < 3 {
        return Err(Error::InvalidParameters("E needs k >= 3".into()));
    }
    let (_, cover) = choose_base(k, choice, |_| true)?;
    let a = &cover.deck;
    let dims = [k, k, k, k];
    let i = slot_map(&dims, &[(1, None), (0, Some(a)), (3, None), (2, Some(a))])?;
    let j = slot_map(&dims, &[(2, None), (3, Some(a)), (0, Some(a)), (1, None)])?;
    let s = &cover.subgroup[..];
    let mut tilde = slot_generators(&dims, &[s, s, s, s]);
    tilde.push(i);
    let mut full = tilde.clone();
    full.push(j.clone());
    Ok(CoverData {
        base: FlatManifoldPresentation { dim: 4 * k, generators: full, label: format!("E:k={k}") },
        subgroup: tilde,
        deck: j,
        degree: 2,
    })
}

fn order_three() -> IntMatrix {
    IntMatrix::from_dense(&[vec![0, -1], vec![1, -1]]).unwrap()
}

/// The (Z_3)^3 quotient C with its 3-fold cover C~ generated by alpha, beta;
/// the deck is gamma. `extension_dims` extra coordinates carry the 2-dim
/// representation alpha -> A, beta -> I, gamma -> I.
pub fn build_c3_full(extension_dims: usize) -> Result<CoverData> {
    if !extension_dims.is_multiple_of(2) {
        return Err(Error::InvalidParameters("C3 extension dimension must be even".into()));
    }
    let a = order_three();
    let a2 = a.mul(&a)?;
    let i2 = IntMatrix::identity(2);
    let mu = [q(2, 3), q(1, 3)];
    let z = [q(0, 1), q(0, 1)];
    let t = |blocks: [&[ExactRational; 2]; 5]| -> Vec<ExactRational> { blocks.iter().flat_map(|b| b.iter().cloned()).collect() };
    let m = extension_dims / 2;
    let ext = |block: &IntMatrix| IntMatrix::block_diagonal(&vec![block.clone(); m]);
    let pad = |mut v: Vec<ExactRational>| {
        v.extend(std::iter::repeat_n(q(0, 1), extension_dims));
        v
    };
    let alpha = iso(
        IntMatrix::block_diagonal(&[i2.clone(), a.clone(), a.clone(), a.clone(), a.clone()]).block_sum(&ext(&a)),
        &pad(t([&mu, &mu, &z, &z, &z])),
    )?;
    let beta = iso(
        IntMatrix::block_diagonal(&[a.clone(), a.clone(), i2.clone(), a2, a.clone()]).block_sum(&ext(&i2)),
        &pad(t([&z, &z, &mu, &mu, &z])),
    )?;
    let gamma = iso(
        IntMatrix::block_diagonal(&[i2.clone(), a, i2.clone(), i2.clone(), i2.clone()]).block_sum(&ext(&i2)),
        &pad(t([&z, &z, &z, &z, &mu])),
    )?;
    let dim = 10 + extension_dims;
    Ok(CoverData {
        base: FlatManifoldPresentation {
            dim,
            generators: vec![alpha.clone(), beta.clone(), gamma.clone()],
            label: format!("C3:{extension_dims}"),
        },
        subgroup: vec![alpha, beta],
        deck: gamma,
        degree: 3,
    })
}

/// C~: the (Z_3)^2 quotient, b1 = 0.
pub fn build_wtc3(extension_dims: usize) -> Result<FlatManifoldPresentation> {
    let c = build_c3_full(extension_dims)?;
    Ok(c.cover().with_label(format!("wtC3:{extension_dims}")))
}

/// Quotient of C~ x C~ x E~ x HW by g = (alpha(y), alpha(x), beta(z), tau(w)),
/// dim 35 + 4(k + l).
pub fn build_f(k: usize, l: usize) -> Result<FlatManifoldPresentation> {
    let c3 = build_c3_full(2 * k)?;
    let e = build_e(3 + l)?;
    let hw = hantzsche_wendt();
    let (nc, ne) = (c3.base.dim, e.base.dim);
    let dims = [nc, nc, ne, 3];
    let tau = hw_tau();
    let g = slot_map(&dims, &[(1, Some(&c3.deck)), (0, Some(&c3.deck)), (2, Some(&e.deck)), (3, Some(&tau))])?;
    let mut generators = slot_generators(&dims, &[&c3.subgroup, &c3.subgroup, &e.subgroup, &hw.generators]);
    generators.push(g);
    Ok(FlatManifoldPresentation { dim: dims.iter().sum(), generators, label: format!("F:k={k},l={l}") })
}

/// Quotient of E~ x B3 x B3 by (x, y, z) -> (j(x), z, y), dim 32 + 4k.
pub fn build_ep(k: usize) -> Result<FlatManifoldPresentation> {
    let e = build_e(3 + k)?;
    let b3 = build_wtc3(0)?;
    let dims = [e.base.dim, b3.dim, b3.dim];
    let s = slot_map(&dims, &[(0, Some(&e.deck)), (2, None), (1, None)])?;
    let mut generators = slot_generators(&dims, &[&e.subgroup, &b3.generators, &b3.generators]);
    generators.push(s);
    Ok(FlatManifoldPresentation { dim: dims.iter().sum(), generators, label: format!("Ep:k={k}") })
}

/// Mapping torus of companion(Phi_7)^k + companion(Phi_15)^l, dim 6k + 8l + 1.
pub fn mapping_torus(k: usize, l: usize) -> Result<FlatManifoldPresentation> {
    if k == 0 && l == 0 {
        return Err(Error::InvalidParameters("mapping torus needs (k, l) != (0, 0)".into()));
    }
    let c7 = companion(&cyclotomic_polynomial(7))?;
    let c15 = companion(&cyclotomic_polynomial(15))?;
    let mut blocks = vec![c7; k];
    blocks.extend(vec![c15; l]);
    blocks.push(IntMatrix::identity(1));
    let a = IntMatrix::block_diagonal(&blocks);
    let n = a.dim();
    let d = match (k > 0, l > 0) {
        (true, true) => 105,
        (true, false) => 7,
        _ => 15,
    };
    let mut num = vec![0i64; n];
    num[n - 1] = 1;
    let g = AffineTorusIsometry::new(a, TorusVector::from_fractions(d, num)?)?;
    Ok(FlatManifoldPresentation { dim: n, generators: vec![g], label: format!("mt:k={k},l={l}") })
}
