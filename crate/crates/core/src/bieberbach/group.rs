use indexmap::{IndexMap, IndexSet};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::isometry::{AffineTorusIsometry, FixedPointData};
use super::matrix::{IntMatrix, TorusVector};
use crate::error::{Error, Result};
use crate::exactnum::linalg::SparseSystem;
use crate::exec::{self, ExecMode};

/// Default bound on the size of a generated group.
pub const DEFAULT_MAX_GROUP_SIZE: usize = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub struct GroupOptions {
    pub max_size: usize,
    pub exec: ExecMode,
}

impl Default for GroupOptions {
    fn default() -> Self {
        GroupOptions { max_size: DEFAULT_MAX_GROUP_SIZE, exec: ExecMode::default() }
    }
}

/// A finite group of torus isometries given by generators; the flat manifold
/// is the quotient of the torus by it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationJson")]
pub struct FlatManifoldPresentation {
    pub dim: usize,
    pub generators: Vec<AffineTorusIsometry>,
    pub label: String,
}

#[derive(Deserialize)]
struct PresentationJson {
    dim: usize,
    generators: Vec<AffineTorusIsometry>,
    #[serde(default)]
    label: String,
}

impl TryFrom<PresentationJson> for FlatManifoldPresentation {
    type Error = Error;
    fn try_from(j: PresentationJson) -> Result<Self> {
        FlatManifoldPresentation::new(j.dim, j.generators, j.label)
    }
}

impl FlatManifoldPresentation {
    pub fn new(dim: usize, generators: Vec<AffineTorusIsometry>, label: impl Into<String>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.dim() != dim) {
            return Err(Error::DimensionMismatch(dim, g.dim()));
        }
        Ok(FlatManifoldPresentation { dim, generators, label: label.into() })
    }

    pub fn torus(n: usize) -> Self {
        FlatManifoldPresentation { dim: n, generators: vec![], label: format!("torus:{n}") }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Holonomy of a verified flat manifold.
#[derive(Debug, Clone, Serialize)]
pub struct HolonomyData {
    #[serde(skip)]
    pub elements: Vec<IntMatrix>,
    pub order: usize,
    pub b1: usize,
    pub orientable: bool,
    pub group_order: usize,
}

/// All elements of the finite group generated by `gens`, in breadth-first
/// order starting from the identity.
pub fn generate_group(dim: usize, gens: &[AffineTorusIsometry]) -> Result<Vec<AffineTorusIsometry>> {
    generate_group_with(dim, gens, &GroupOptions::default())
}

pub fn generate_group_with(
    dim: usize,
    gens: &[AffineTorusIsometry],
    opts: &GroupOptions,
) -> Result<Vec<AffineTorusIsometry>> {
    if let Some(g) = gens.iter().find(|g| g.dim() != dim) {
        return Err(Error::DimensionMismatch(dim, g.dim()));
    }
    let mut set: IndexSet<AffineTorusIsometry> = IndexSet::new();
    set.insert(AffineTorusIsometry::identity(dim));
    let mut i = 0;
    while i < set.len() {
        let e = set[i].clone();
        for g in gens {
            set.insert(e.compose(g)?);
            if set.len() > opts.max_size {
                return Err(Error::GroupTooLarge(opts.max_size));
            }
        }
        i += 1;
    }
    Ok(set.into_iter().collect())
}

/// Dimension of the subspace fixed by every matrix.
pub fn joint_fixed_dimension(dim: usize, mats: &[&IntMatrix]) -> usize {
    let mut sys = SparseSystem::new(dim);
    for a in mats {
        for i in 0..dim {
            let row = a.row(i).iter().map(|&(j, v)| (j as usize, BigInt::from(v)));
            sys.push(row.chain(std::iter::once((i, BigInt::from(-1)))));
        }
    }
    sys.nullspace().len()
}

/// Checks that the group acts freely and returns its holonomy.
pub fn verify_flat_manifold(p: &FlatManifoldPresentation) -> Result<HolonomyData> {
    verify_flat_manifold_with(p, &GroupOptions::default())
}

pub fn verify_flat_manifold_with(p: &FlatManifoldPresentation, opts: &GroupOptions) -> Result<HolonomyData> {
    let group = generate_group_with(p.dim, &p.generators, opts)?;
    let mut by_linear: IndexMap<&IntMatrix, Vec<&TorusVector>> = IndexMap::new();
    for g in &group {
        by_linear.entry(g.linear()).or_default().push(g.translation());
    }
    let classes: Vec<(&IntMatrix, Vec<&TorusVector>)> = by_linear.into_iter().collect();
    let offender = exec::find_first(opts.exec, &classes, |(a, ts)| {
        if a.is_identity() {
            return None;
        }
        let data = FixedPointData::new(a);
        ts.iter().find(|t| data.has_fixed_point(t)).map(|t| (*t).clone())
    });
    if let Some((i, t)) = offender {
        let bad = AffineTorusIsometry::from_parts(classes[i].0.clone(), t);
        return Err(Error::NotFree(serde_json::to_string(&bad).unwrap_or_else(|_| format!("{bad:?}"))));
    }
    let gens: Vec<&IntMatrix> = p.generators.iter().map(|g| g.linear()).collect();
    let b1 = joint_fixed_dimension(p.dim, &gens);
    let orientable = gens.iter().all(|a| a.det() == BigInt::from(1));
    let elements: Vec<IntMatrix> = classes.into_iter().map(|(a, _)| a.clone()).collect();
    Ok(HolonomyData { order: elements.len(), elements, b1, orientable, group_order: group.len() })
}

/// Product manifold: block sums acting on T^{m+n}.
pub fn product(p: &FlatManifoldPresentation, q: &FlatManifoldPresentation) -> FlatManifoldPresentation {
    let (ip, iq) = (AffineTorusIsometry::identity(p.dim), AffineTorusIsometry::identity(q.dim));
    let generators = p
        .generators
        .iter()
        .map(|g| g.block_sum(&iq))
        .chain(q.generators.iter().map(|h| ip.block_sum(h)))
        .collect();
    FlatManifoldPresentation {
        dim: p.dim + q.dim,
        generators,
        label: format!("product({}, {})", p.label, q.label),
    }
}

/// Generators (A_i + sigma_i, (t_i, 0)). sigma must factor through the group
/// generated by P, which is checked by comparing group orders.
pub fn toral_extension(p: &FlatManifoldPresentation, sigma: &[IntMatrix]) -> Result<FlatManifoldPresentation> {
    toral_extension_with(p, sigma, &GroupOptions::default())
}

pub fn toral_extension_with(
    p: &FlatManifoldPresentation,
    sigma: &[IntMatrix],
    opts: &GroupOptions,
) -> Result<FlatManifoldPresentation> {
    if sigma.len() != p.generators.len() {
        return Err(Error::DimensionMismatch(p.generators.len(), sigma.len()));
    }
    let m = sigma.first().map_or(0, IntMatrix::dim);
    let mut generators = Vec::with_capacity(sigma.len());
    for (g, s) in p.generators.iter().zip(sigma) {
        if s.dim() != m {
            return Err(Error::DimensionMismatch(m, s.dim()));
        }
        let ext = AffineTorusIsometry::linear_only(s.clone())?;
        generators.push(g.block_sum(&ext));
    }
    let ext = FlatManifoldPresentation {
        dim: p.dim + m,
        generators,
        label: format!("{}+ext{m}", p.label),
    };
    let base = generate_group_with(p.dim, &p.generators, opts)?.len();
    if generate_group_with(ext.dim, &ext.generators, opts)?.len() != base {
        return Err(Error::InconsistentRepresentation);
    }
    Ok(ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    fn hw() -> FlatManifoldPresentation {
        let t = |v: [(i64, i64); 3]| TorusVector::from_rationals(&v.map(|(n, d)| rat(n, d))).unwrap();
        let gamma =
            AffineTorusIsometry::new(IntMatrix::diagonal(&[-1, -1, 1]).unwrap(), t([(0, 1), (1, 2), (1, 2)])).unwrap();
        let delta =
            AffineTorusIsometry::new(IntMatrix::diagonal(&[1, -1, -1]).unwrap(), t([(1, 2), (0, 1), (1, 2)])).unwrap();
        FlatManifoldPresentation::new(3, vec![gamma, delta], "hw").unwrap()
    }

    #[test]
    fn hantzsche_wendt() {
        let p = hw();
        assert_eq!(generate_group(3, &p.generators).unwrap().len(), 4);
        let h = verify_flat_manifold(&p).unwrap();
        assert_eq!((h.order, h.b1, h.orientable), (4, 0, true));
    }

    #[test]
    fn torus() {
        assert_eq!(generate_group(4, &[]).unwrap(), vec![AffineTorusIsometry::identity(4)]);
        let h = verify_flat_manifold(&FlatManifoldPresentation::torus(5)).unwrap();
        assert_eq!((h.order, h.b1, h.orientable), (1, 5, true));
    }

    #[test]
    fn products() {
        let s1 = FlatManifoldPresentation::torus(1);
        let h = verify_flat_manifold(&product(&s1, &hw())).unwrap();
        assert_eq!((h.order, h.b1, h.orientable), (4, 1, true));
        let hh = verify_flat_manifold(&product(&hw(), &hw())).unwrap();
        assert_eq!((hh.order, hh.b1), (16, 0));
        assert_eq!(product(&FlatManifoldPresentation::torus(2), &FlatManifoldPresentation::torus(3)).dim, 5);
    }

    #[test]
    fn orbifold_is_rejected() {
        let rot = AffineTorusIsometry::linear_only(IntMatrix::diagonal(&[-1, 1]).unwrap()).unwrap();
        let p = FlatManifoldPresentation::new(2, vec![rot], "klein-orbifold").unwrap();
        assert!(matches!(verify_flat_manifold(&p), Err(Error::NotFree(_))));
    }

    #[test]
    fn guard() {
        let t = TorusVector::from_rationals(&[rat(1, 7)]).unwrap();
        let g = AffineTorusIsometry::new(IntMatrix::identity(1), t).unwrap();
        let opts = GroupOptions { max_size: 5, ..Default::default() };
        assert_eq!(generate_group_with(1, &[g], &opts), Err(Error::GroupTooLarge(5)));
    }

    #[test]
    fn extensions() {
        let one = |v: i64| IntMatrix::diagonal(&[v]).unwrap();
        let triv = toral_extension(&hw(), &[one(1), one(1)]).unwrap();
        let h = verify_flat_manifold(&triv).unwrap();
        assert_eq!((h.order, h.b1), (4, 1));
        // a character not factoring through the group
        let bad = FlatManifoldPresentation::new(
            1,
            vec![AffineTorusIsometry::new(IntMatrix::identity(1), TorusVector::from_rationals(&[rat(1, 2)]).unwrap())
                .unwrap()],
            "s1",
        )
        .unwrap();
        let ok = toral_extension(&bad, &[one(-1)]).unwrap();
        assert!(verify_flat_manifold(&ok).is_ok());
        let two = FlatManifoldPresentation::new(
            1,
            vec![
                AffineTorusIsometry::new(IntMatrix::identity(1), TorusVector::from_rationals(&[rat(1, 2)]).unwrap())
                    .unwrap(),
                AffineTorusIsometry::new(IntMatrix::identity(1), TorusVector::from_rationals(&[rat(1, 2)]).unwrap())
                    .unwrap(),
            ],
            "s1",
        )
        .unwrap();
        assert_eq!(toral_extension(&two, &[one(-1), one(1)]), Err(Error::InconsistentRepresentation));
    }

    #[test]
    fn json_round_trip() {
        let p = hw();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.starts_with(r#"{"dim":3,"generators":[{"linear":[[-1,0,0],[0,-1,0],[0,0,1]],"translation":["0","1/2","1/2"]}"#));
        let back: FlatManifoldPresentation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"dim":1,"generators":[{"linear":[[2]],"translation":["0"]}],"label":""}"#;
        assert!(serde_json::from_str::<FlatManifoldPresentation>(bad).is_err());
    }
}
