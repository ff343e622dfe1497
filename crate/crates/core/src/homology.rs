//! The equivariant chain complex of a pointed simplicial G-set with
//! coefficients in a covariant coefficient system, and its exact homology.
//!
//! Degree q of the complex is the direct sum, over orbit representatives σ of
//! the nondegenerate non-basepoint q-cells, of the coefficient modules at the
//! isotropy orbit G/G_σ. The differential pushes a coefficient along the face
//! projection G/G_σ → G/G_{d_iσ} and then translates the landing cell back to
//! its orbit representative; degenerate faces and faces at the basepoint
//! contribute nothing. Homology is computed exactly: Smith normal form over
//! Z, row reduction over Q and prime fields.

use crate::coeff::CoefficientSystem;
use crate::matrix::{smith_normal_form, Mat};
use crate::orbit::SubgroupId;
use crate::par;
use crate::ring::Ring;
use crate::simplicial::{plus, SimplicialGMap, SimplicialGSet};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("space and coefficients live over different groups")]
    GroupMismatch,
    #[error("differentials do not compose to zero out of degree {q}")]
    NotAComplex { q: usize },
    #[error("malformed chain data: {0}")]
    Malformed(String),
}

/// A finite chain complex of free modules over the coefficient ring, with the
/// degree-q module presented as blocks indexed by orbit representatives.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    ring: Ring,
    /// blocks[q]: (orbit representative cell, block width) in column order
    blocks: Vec<Vec<(usize, usize)>>,
    dims: Vec<usize>,
    /// diffs[q]: C_q → C_{q-1}; diffs[0] has zero rows
    diffs: Vec<Mat>,
}

impl ChainComplex {
    /// Assembles a complex from raw differentials (one per degree, the
    /// degree-0 one with zero rows). Shape errors are caught here; d∘d = 0 is
    /// checked by [`homology`].
    pub fn from_parts(ring: Ring, dims: Vec<usize>, diffs: Vec<Mat>) -> Result<ChainComplex, HomologyError> {
        if dims.is_empty() || diffs.len() != dims.len() {
            return Err(HomologyError::Malformed(
                "need one differential per degree".into(),
            ));
        }
        if diffs[0].rows() != 0 {
            return Err(HomologyError::Malformed(
                "the degree-0 differential must have zero rows".into(),
            ));
        }
        for q in 0..dims.len() {
            if diffs[q].cols() != dims[q] || (q > 0 && diffs[q].rows() != dims[q - 1]) {
                return Err(HomologyError::Malformed(format!(
                    "differential {q} has shape {}x{}, expected {}x{}",
                    diffs[q].rows(),
                    diffs[q].cols(),
                    if q > 0 { dims[q - 1] } else { 0 },
                    dims[q]
                )));
            }
        }
        let blocks = dims.iter().map(|&d| vec![(0, d)]).collect();
        Ok(ChainComplex { ring, blocks, dims, diffs })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total rank of the degree-q module (0 above the top degree).
    pub fn dim_at(&self, q: usize) -> usize {
        self.dims.get(q).copied().unwrap_or(0)
    }

    /// The (orbit representative, block width) pairs of degree q.
    pub fn blocks(&self, q: usize) -> &[(usize, usize)] {
        self.blocks.get(q).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Column offset of the block belonging to an orbit representative.
    pub fn offset_of(&self, q: usize, rep: usize) -> Option<usize> {
        let mut offset = 0;
        for &(r, w) in self.blocks(q) {
            if r == rep {
                return Some(offset);
            }
            offset += w;
        }
        None
    }

    pub fn diff(&self, q: usize) -> &Mat {
        &self.diffs[q]
    }
}

/// The coefficient block carrying a value at `cell` (in dimension `d`) back
/// to the cell's orbit representative: translate-to-representative composed
/// with the canonical projection out of `from`.
pub(crate) fn landing_block(
    m: &CoefficientSystem,
    space: &SimplicialGSet,
    d: usize,
    cell: usize,
    from: SubgroupId,
) -> (usize, Mat) {
    let group = space.group();
    let orbit = m.orbit();
    let rep = space.orbit_rep(d, cell);
    let t = space.translation_from_rep(d, cell);
    let cell_iso = orbit
        .id_of(&space.isotropy(d, cell))
        .expect("subgroups of the acting group are orbit objects");
    let proj = orbit
        .canonical_projection(from, cell_iso)
        .expect("isotropy only grows along faces and equivariant maps");
    let trans = orbit
        .right_translation(group.inv(t), cell_iso)
        .expect("translations are invertible morphisms");
    let mat = m.matrix(&trans).mul(m.matrix(&proj), &m.ring());
    (rep, mat)
}

/// The reduced equivariant chain complex of a pointed simplicial G-set.
pub fn chain_complex(
    k: &SimplicialGSet,
    m: &CoefficientSystem,
) -> Result<ChainComplex, HomologyError> {
    if k.group() != m.group() {
        return Err(HomologyError::GroupMismatch);
    }
    let ring = m.ring();
    let orbit = m.orbit();
    let mut blocks: Vec<Vec<(usize, usize)>> = Vec::with_capacity(k.dim() + 1);
    let mut iso_ids: Vec<Vec<SubgroupId>> = Vec::with_capacity(k.dim() + 1);
    for q in 0..=k.dim() {
        let mut row = Vec::new();
        let mut ids = Vec::new();
        for (rep, _) in k.orbits(q) {
            if q == 0 && rep == k.basepoint() {
                continue;
            }
            let id = orbit
                .id_of(&k.isotropy(q, rep))
                .expect("subgroups of the acting group are orbit objects");
            row.push((rep, m.rank(id)));
            ids.push(id);
        }
        blocks.push(row);
        iso_ids.push(ids);
    }
    let dims: Vec<usize> = blocks
        .iter()
        .map(|row| row.iter().map(|&(_, w)| w).sum())
        .collect();
    let offsets: Vec<BTreeMap<usize, usize>> = blocks
        .iter()
        .map(|row| {
            let mut map = BTreeMap::new();
            let mut offset = 0;
            for &(rep, w) in row {
                map.insert(rep, offset);
                offset += w;
            }
            map
        })
        .collect();
    let minus_one = ring.from_i64(-1);
    let mut diffs: Vec<Mat> = vec![Mat::zeros(0, dims[0])];
    for q in 1..=k.dim() {
        let mut d = Mat::zeros(dims[q - 1], dims[q]);
        let mut col = 0;
        for (b, &(sigma, width)) in blocks[q].iter().enumerate() {
            let from = iso_ids[q][b];
            for i in 0..=q {
                let fs = k.face(q, sigma, i);
                if fs.is_degenerate() {
                    continue;
                }
                if fs.base_dim() == 0 && fs.base_cell() == k.basepoint() {
                    continue;
                }
                let (rep, mat) = landing_block(m, k, q - 1, fs.base_cell(), from);
                let signed = if i % 2 == 1 { mat.scale(&minus_one, &ring) } else { mat };
                d.add_block(offsets[q - 1][&rep], col, &signed, &ring);
            }
            col += width;
        }
        diffs.push(d);
    }
    Ok(ChainComplex { ring, blocks, dims, diffs })
}

/// One homology group: free rank plus invariant factors (ascending, each
/// dividing the next; empty over a field).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    fn render(&self, ring: &Ring) -> String {
        let mut parts: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push(ring.to_string()),
            b => parts.push(format!("{ring}^{b}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Homology groups by degree. Equality ignores trailing trivial degrees, so
/// results of different top dimension compare as expected.
#[derive(Clone, Debug, Eq)]
pub struct HomologyResult {
    ring: Ring,
    groups: Vec<HomologyGroup>,
}

impl PartialEq for HomologyResult {
    fn eq(&self, other: &HomologyResult) -> bool {
        let a = trimmed(&self.groups);
        let b = trimmed(&other.groups);
        a == b
    }
}

fn trimmed(groups: &[HomologyGroup]) -> &[HomologyGroup] {
    let mut end = groups.len();
    while end > 0 && groups[end - 1].is_trivial() {
        end -= 1;
    }
    &groups[..end]
}

impl HomologyResult {
    pub fn new(ring: Ring, groups: Vec<HomologyGroup>) -> HomologyResult {
        HomologyResult { ring, groups }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn groups(&self) -> &[HomologyGroup] {
        &self.groups
    }

    /// The group in degree q (trivial above the computed range).
    pub fn group(&self, q: usize) -> HomologyGroup {
        self.groups
            .get(q)
            .cloned()
            .unwrap_or(HomologyGroup { betti: 0, torsion: Vec::new() })
    }

    /// Degreewise direct sum; invariant factors are merged through their
    /// prime-power decompositions and reassembled in divisibility order.
    pub fn direct_sum(&self, other: &HomologyResult) -> HomologyResult {
        let len = self.groups.len().max(other.groups.len());
        let groups = (0..len)
            .map(|q| {
                let a = self.group(q);
                let b = other.group(q);
                HomologyGroup {
                    betti: a.betti + b.betti,
                    torsion: merge_torsion(&a.torsion, &b.torsion),
                }
            })
            .collect();
        HomologyResult { ring: self.ring, groups }
    }

    /// Stable JSON form: `{"H": [{"q": 0, "betti": 1, "torsion": ["2"]}, …]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let h: Vec<serde_json::Value> = self
            .groups
            .iter()
            .enumerate()
            .map(|(q, g)| {
                json!({
                    "q": q,
                    "betti": g.betti,
                    "torsion": g.torsion.iter().map(BigInt::to_string).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "H": h })
    }
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, g) in self.groups.iter().enumerate() {
            writeln!(f, "H_{q} = {}", g.render(&self.ring))?;
        }
        Ok(())
    }
}

fn prime_power_factors(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while (&d * &d) <= n {
        let mut e = 0u32;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn merge_torsion(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut by_prime: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
    for d in a.iter().chain(b.iter()) {
        for (p, e) in prime_power_factors(d) {
            by_prime.entry(p).or_default().push(e);
        }
    }
    let count = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![BigInt::one(); count];
    for (p, mut exps) in by_prime {
        exps.sort_unstable_by(|x, y| y.cmp(x));
        for (k, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                out[k] *= &p;
            }
        }
    }
    out.reverse();
    out
}

/// Exact homology of a chain complex: Betti numbers from ranks, torsion from
/// the Smith normal form of the incoming differential (over Z only; fields
/// have none). Fails with [`HomologyError::NotAComplex`] when d∘d ≠ 0.
pub fn homology(c: &ChainComplex) -> Result<HomologyResult, HomologyError> {
    let ring = c.ring;
    let top = c.top_degree();
    for q in 2..=top {
        if !c.diffs[q - 1].mul(&c.diffs[q], &ring).is_zero() {
            return Err(HomologyError::NotAComplex { q });
        }
    }
    // rank and invariant factors of every differential, in parallel
    let data: Vec<(usize, Vec<BigInt>)> = par::map((0..=top).collect(), |q| {
        let d = &c.diffs[q];
        match ring {
            Ring::Integers => {
                let snf = smith_normal_form(d);
                let torsion = snf.invariants.into_iter().filter(|x| !x.is_one()).collect();
                (snf.rank, torsion)
            }
            _ => (d.rank(&ring), Vec::new()),
        }
    });
    let groups = (0..=top)
        .map(|q| {
            let below = data[q].0;
            let (above, torsion) = match data.get(q + 1) {
                Some((r, t)) => (*r, t.clone()),
                None => (0, Vec::new()),
            };
            HomologyGroup { betti: c.dims[q] - below - above, torsion }
        })
        .collect();
    Ok(HomologyResult { ring, groups })
}

/// Reduced equivariant homology of a space with the given coefficients.
pub fn reduced_homology(
    k: &SimplicialGSet,
    m: &CoefficientSystem,
) -> Result<HomologyResult, HomologyError> {
    homology(&chain_complex(k, m)?)
}

/// Unreduced homology: reduced homology after adjoining a disjoint
/// basepoint (which demotes the old one to an ordinary vertex).
pub fn unreduced_homology(
    k: &SimplicialGSet,
    m: &CoefficientSystem,
) -> Result<HomologyResult, HomologyError> {
    reduced_homology(&plus(k), m)
}

/// The chain map induced by a pointed simplicial G-map: one matrix per
/// degree of the source, rows indexed by the target complex. Cells landing
/// degenerately or at the basepoint contribute zero columns.
pub fn induced_map(
    f: &SimplicialGMap,
    m: &CoefficientSystem,
) -> Result<Vec<Mat>, HomologyError> {
    let src = chain_complex(f.source(), m)?;
    let tgt = chain_complex(f.target(), m)?;
    let ring = m.ring();
    let orbit = m.orbit();
    let mats = (0..=f.source().dim())
        .map(|q| {
            let mut mat = Mat::zeros(tgt.dim_at(q), src.dim_at(q));
            let mut col = 0;
            for &(sigma, width) in src.blocks(q) {
                let from = orbit
                    .id_of(&f.source().isotropy(q, sigma))
                    .expect("subgroups of the acting group are orbit objects");
                let fs = f.apply(q, sigma);
                if !fs.is_degenerate()
                    && !(fs.base_dim() == 0 && fs.base_cell() == f.target().basepoint())
                {
                    let (rep, block) =
                        landing_block(m, f.target(), q, fs.base_cell(), from);
                    let row = tgt.offset_of(q, rep).expect("representative has a block");
                    mat.add_block(row, col, &block, &ring);
                }
                col += width;
            }
            mat
        })
        .collect();
    Ok(mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{builtin_mackey, constant_system, linearization_system};
    use crate::group::Group;
    use crate::gset::GSet;
    use crate::orbit::OrbitCategory;
    use crate::simplicial::{
        builtin_space, from_gset_plus, wedge, FormalSimplex, SimplicialHomotopy,
    };
    use std::sync::Arc;

    fn big(values: &[i64]) -> Vec<BigInt> {
        values.iter().map(|&v| BigInt::from(v)).collect()
    }

    fn group_result(betti: &[usize], torsion: &[(usize, &[i64])]) -> Vec<HomologyGroup> {
        betti
            .iter()
            .enumerate()
            .map(|(q, &b)| HomologyGroup {
                betti: b,
                torsion: torsion
                    .iter()
                    .find(|&&(tq, _)| tq == q)
                    .map(|&(_, t)| big(t))
                    .unwrap_or_default(),
            })
            .collect()
    }

    fn constant_over(group: &Arc<Group>, ring: Ring) -> Arc<CoefficientSystem> {
        let orbit = Arc::new(OrbitCategory::new(group.clone()));
        Arc::new(constant_system(orbit, ring))
    }

    fn linearization_over(group: &Arc<Group>, ring: Ring) -> Arc<CoefficientSystem> {
        let orbit = Arc::new(OrbitCategory::new(group.clone()));
        Arc::new(linearization_system(orbit, ring))
    }

    #[test]
    fn chain_complex_of_the_subdivided_sphere() {
        let g = Arc::new(Group::cyclic(2));
        let k = builtin_space("sphere2_antipodal", &g).unwrap();
        let m = constant_over(&g, Ring::Integers);
        let c = chain_complex(&k, &m).unwrap();
        // all orbits free: 12 vertex orbits (basepoint excluded), 36 edge
        // orbits, 24 triangle orbits, each contributing rank 1
        assert_eq!(c.dims(), &[12, 36, 24]);
        let lin = linearization_over(&g, Ring::Integers);
        let c = chain_complex(&k, &lin).unwrap();
        assert_eq!(c.dims(), &[24, 72, 48]);
    }

    #[test]
    fn homology_of_builtin_spaces_over_z() {
        let g = Arc::new(Group::cyclic(2));
        let constant = constant_over(&g, Ring::Integers);
        let lin = linearization_over(&g, Ring::Integers);

        // constant coefficients see the orbit space
        let k = builtin_space("circle_antipodal", &g).unwrap();
        let h = reduced_homology(&k, &constant).unwrap();
        assert_eq!(h.groups(), group_result(&[0, 1], &[]).as_slice());
        // linearization sees the underlying space, here a wedge of 2 circles
        let h = reduced_homology(&k, &lin).unwrap();
        assert_eq!(h.groups(), group_result(&[0, 2], &[]).as_slice());

        // the reflection circle has contractible orbit space
        let k = builtin_space("circle_reflection", &g).unwrap();
        let h = reduced_homology(&k, &constant).unwrap();
        assert!(h.groups().iter().all(HomologyGroup::is_trivial));
        let h = reduced_homology(&k, &lin).unwrap();
        assert_eq!(h.groups(), group_result(&[0, 1], &[]).as_slice());

        // the antipodal sphere: orbit space is a projective plane, underlying
        // space (after the collapse) a sphere wedge a circle
        let k = builtin_space("sphere2_antipodal", &g).unwrap();
        let h = reduced_homology(&k, &constant).unwrap();
        assert_eq!(
            h.groups(),
            group_result(&[0, 0, 0], &[(1, &[2])]).as_slice()
        );
        let h = reduced_homology(&k, &lin).unwrap();
        assert_eq!(h.groups(), group_result(&[0, 1, 1], &[]).as_slice());
    }

    #[test]
    fn rotation_circles_see_their_quotient_circle() {
        for n in [1usize, 2, 3, 6] {
            let g = Arc::new(Group::cyclic(n));
            let constant = constant_over(&g, Ring::Integers);
            let k = builtin_space("circle_rotation", &g).unwrap();
            let h = reduced_homology(&k, &constant).unwrap();
            assert_eq!(h.groups(), group_result(&[0, 1], &[]).as_slice(), "n = {n}");
        }
    }

    #[test]
    fn zero_sphere_has_only_coefficients_at_the_bottom() {
        for name in ["constant", "linearization", "fixed_point_trivial", "fixed_point_regular"] {
            let g = Arc::new(Group::symmetric_3());
            let orbit = Arc::new(OrbitCategory::new(g.clone()));
            let m = builtin_mackey(name, orbit.clone(), Ring::Integers).unwrap();
            let system = Arc::new(m.covariant().clone());
            let k = builtin_space("s0_trivial", &g).unwrap();
            let h = reduced_homology(&k, &system).unwrap();
            let expected = system.rank(orbit.full_id());
            assert_eq!(h.group(0).betti, expected, "coefficients {name}");
            assert!(h.group(0).torsion.is_empty());
            assert!(h.groups()[1..].iter().all(HomologyGroup::is_trivial));
        }
    }

    #[test]
    fn field_coefficients_turn_torsion_into_rank() {
        let g = Arc::new(Group::cyclic(2));
        let k = builtin_space("sphere2_antipodal", &g).unwrap();
        let h = reduced_homology(&k, &constant_over(&g, Ring::prime_field(2).unwrap())).unwrap();
        assert_eq!(h.groups(), group_result(&[0, 1, 1], &[]).as_slice());
        let h = reduced_homology(&k, &constant_over(&g, Ring::prime_field(3).unwrap())).unwrap();
        assert!(h.groups().iter().all(HomologyGroup::is_trivial));
        let h = reduced_homology(&k, &constant_over(&g, Ring::Rationals)).unwrap();
        assert!(h.groups().iter().all(HomologyGroup::is_trivial));
    }

    #[test]
    fn direct_sum_regroups_invariant_factors() {
        let one = |t: &[i64]| HomologyResult::new(
            Ring::Integers,
            vec![HomologyGroup { betti: 1, torsion: big(t) }],
        );
        let sum = one(&[2]).direct_sum(&one(&[3]));
        assert_eq!(sum.group(0).betti, 2);
        assert_eq!(sum.group(0).torsion, big(&[6]));

        let sum = one(&[2, 4]).direct_sum(&one(&[3]));
        assert_eq!(sum.group(0).torsion, big(&[2, 12]));

        let sum = one(&[6]).direct_sum(&one(&[4]));
        assert_eq!(sum.group(0).torsion, big(&[2, 12]));

        // different lengths pad with trivial groups
        let taller = HomologyResult::new(
            Ring::Integers,
            vec![
                HomologyGroup { betti: 0, torsion: vec![] },
                HomologyGroup { betti: 5, torsion: big(&[7]) },
            ],
        );
        let sum = one(&[]).direct_sum(&taller);
        assert_eq!(sum.group(0).betti, 1);
        assert_eq!(sum.group(1).betti, 5);
        assert_eq!(sum.group(1).torsion, big(&[7]));
    }

    #[test]
    fn equality_ignores_trailing_trivial_degrees() {
        let a = HomologyResult::new(Ring::Integers, group_result(&[1, 0], &[]));
        let b = HomologyResult::new(Ring::Integers, group_result(&[1, 0, 0, 0], &[]));
        assert_eq!(a, b);
        let c = HomologyResult::new(Ring::Integers, group_result(&[1, 0, 1], &[]));
        assert_ne!(a, c);
    }

    #[test]
    fn wedge_homology_adds() {
        let g = Arc::new(Group::cyclic(2));
        let a = Arc::new(builtin_space("circle_antipodal", &g).unwrap());
        let b = Arc::new(builtin_space("sphere2_antipodal", &g).unwrap());
        let (w, _, _) = wedge(&a, &b).unwrap();
        let orbit = Arc::new(OrbitCategory::new(g.clone()));
        for name in ["constant", "fixed_point_regular"] {
            let m = builtin_mackey(name, orbit.clone(), Ring::Integers).unwrap();
            let system = Arc::new(m.covariant().clone());
            let whole = reduced_homology(&w, &system).unwrap();
            let parts = reduced_homology(&a, &system)
                .unwrap()
                .direct_sum(&reduced_homology(&b, &system).unwrap());
            assert_eq!(whole, parts, "coefficients {name}");
        }
    }

    #[test]
    fn induced_maps_are_chain_maps() {
        let g = Arc::new(Group::cyclic(2));
        let a = Arc::new(builtin_space("circle_antipodal", &g).unwrap());
        let b = Arc::new(builtin_space("sphere2_antipodal", &g).unwrap());
        let (w, ia, ib) = wedge(&a, &b).unwrap();
        let m = constant_over(&g, Ring::Integers);
        let cw = chain_complex(&w, &m).unwrap();

        for (f, part) in [(&ia, &a), (&ib, &b)] {
            let mats = induced_map(f, &m).unwrap();
            let cs = chain_complex(part, &m).unwrap();
            for q in 1..=part.dim() {
                let lhs = cw.diff(q).mul(&mats[q], &m.ring());
                let rhs = mats[q - 1].mul(cs.diff(q), &m.ring());
                assert_eq!(lhs, rhs, "degree {q}");
            }
        }

        // identities induce identities
        let id = SimplicialGMap::identity(&a);
        for (q, mat) in induced_map(&id, &m).unwrap().iter().enumerate() {
            assert!(mat.is_identity(), "degree {q}");
        }

        // the collapse induces zero
        let pt = Arc::new(from_gset_plus(&GSet::new(g.clone(), vec![vec![], vec![]]).unwrap()));
        let collapse = SimplicialGMap::collapse(&a, &pt);
        for mat in induced_map(&collapse, &m).unwrap() {
            assert!(mat.is_zero());
        }
    }

    #[test]
    fn unreduced_homology_counts_components() {
        let g = Arc::new(Group::trivial());
        let k = builtin_space("circle_rotation", &g).unwrap();
        let m = constant_over(&g, Ring::Integers);
        let h = unreduced_homology(&k, &m).unwrap();
        assert_eq!(h.groups(), group_result(&[1, 1], &[]).as_slice());
    }

    #[test]
    fn bad_differentials_are_rejected() {
        let err = ChainComplex::from_parts(
            Ring::Integers,
            vec![1, 1],
            vec![Mat::zeros(0, 1), Mat::zeros(2, 1)],
        )
        .unwrap_err();
        assert!(matches!(err, HomologyError::Malformed(_)));

        let c = ChainComplex::from_parts(
            Ring::Integers,
            vec![1, 1, 1],
            vec![
                Mat::zeros(0, 1),
                Mat::from_rows_i64(&[vec![1]]),
                Mat::from_rows_i64(&[vec![1]]),
            ],
        )
        .unwrap();
        assert_eq!(homology(&c).unwrap_err(), HomologyError::NotAComplex { q: 2 });
    }

    /// Two intervals joined at the basepoint, swapped by the Z/2 action, and
    /// the equivariant contraction onto the basepoint.
    fn swapped_intervals_with_contraction() -> (Arc<SimplicialGSet>, SimplicialHomotopy) {
        let g = Arc::new(Group::cyclic(2));
        let cells = vec![3, 2];
        let faces = vec![vec![
            vec![FormalSimplex::vertex(1), FormalSimplex::vertex(0)],
            vec![FormalSimplex::vertex(2), FormalSimplex::vertex(0)],
        ]];
        let action = vec![vec![vec![0, 1, 2], vec![0, 2, 1]], vec![vec![0, 1], vec![1, 0]]];
        let k = Arc::new(SimplicialGSet::new(g, cells, faces, action, 0).unwrap());
        let id = SimplicialGMap::identity(&k);
        let constant = SimplicialGMap::collapse(&k, &k);
        let pieces = vec![
            vec![
                vec![FormalSimplex::vertex(0).degenerate(0)],
                vec![FormalSimplex::nondegenerate(1, 0)],
                vec![FormalSimplex::nondegenerate(1, 1)],
            ],
            vec![
                vec![
                    FormalSimplex::nondegenerate(1, 0).degenerate(0),
                    FormalSimplex::nondegenerate(1, 0).degenerate(0),
                ],
                vec![
                    FormalSimplex::nondegenerate(1, 1).degenerate(0),
                    FormalSimplex::nondegenerate(1, 1).degenerate(0),
                ],
            ],
        ];
        let h = SimplicialHomotopy::new(id, constant, pieces).unwrap();
        (k, h)
    }

    /// The alternating sum of the prism pieces as a block matrix
    /// C_q(source) → C_{q+1}(target).
    fn prism_matrix(
        h: &SimplicialHomotopy,
        m: &CoefficientSystem,
        src: &ChainComplex,
        tgt: &ChainComplex,
        q: usize,
    ) -> Mat {
        let space = h.from_map().source();
        let target = h.from_map().target();
        let ring = m.ring();
        let orbit = m.orbit();
        let minus_one = ring.from_i64(-1);
        let mut mat = Mat::zeros(tgt.dim_at(q + 1), src.dim_at(q));
        let mut col = 0;
        for &(sigma, width) in src.blocks(q) {
            let from = orbit.id_of(&space.isotropy(q, sigma)).unwrap();
            for i in 0..=q {
                let piece = h.piece(q, sigma, i);
                if piece.is_degenerate() {
                    continue;
                }
                if piece.base_dim() == 0 && piece.base_cell() == target.basepoint() {
                    continue;
                }
                let (rep, block) = landing_block(m, target, q + 1, piece.base_cell(), from);
                let signed = if i % 2 == 1 { block.scale(&minus_one, &ring) } else { block };
                let row = tgt.offset_of(q + 1, rep).expect("representative has a block");
                mat.add_block(row, col, &signed, &ring);
            }
            col += width;
        }
        mat
    }

    #[test]
    fn homotopic_maps_are_chain_homotopic() {
        let (k, h) = swapped_intervals_with_contraction();
        let g = k.group().clone();
        let orbit = Arc::new(OrbitCategory::new(g.clone()));
        for name in ["constant", "fixed_point_regular"] {
            let m = builtin_mackey(name, orbit.clone(), Ring::Integers).unwrap();
            let system = Arc::new(m.covariant().clone());
            let c = chain_complex(&k, &system).unwrap();
            let f_mats = induced_map(h.from_map(), &system).unwrap();
            let g_mats = induced_map(h.to_map(), &system).unwrap();
            let ring = system.ring();
            for q in 0..=k.dim() {
                let mut rhs = Mat::zeros(c.dim_at(q), c.dim_at(q));
                if q + 1 <= k.dim() {
                    let hq = prism_matrix(&h, &system, &c, &c, q);
                    rhs = rhs.add(&c.diff(q + 1).mul(&hq, &ring), &ring);
                }
                if q > 0 {
                    let hq1 = prism_matrix(&h, &system, &c, &c, q - 1);
                    rhs = rhs.add(&hq1.mul(c.diff(q), &ring), &ring);
                }
                let lhs = f_mats[q].sub(&g_mats[q], &ring);
                assert_eq!(lhs, rhs, "coefficients {name}, degree {q}");
            }
            // and therefore equal maps on homology (both sides contractible)
            let hk = homology(&c).unwrap();
            assert!(hk.groups().iter().all(HomologyGroup::is_trivial));
        }
    }

    #[test]
    fn json_serialization_is_stable() {
        let h = HomologyResult::new(
            Ring::Integers,
            vec![
                HomologyGroup { betti: 1, torsion: vec![] },
                HomologyGroup { betti: 0, torsion: big(&[2, 4]) },
            ],
        );
        let json = serde_json::to_string(&h.to_json()).unwrap();
        assert_eq!(
            json,
            r#"{"H":[{"betti":1,"q":0,"torsion":[]},{"betti":0,"q":1,"torsion":["2","4"]}]}"#
        );
        assert_eq!(format!("{h}"), "H_0 = Z\nH_1 = Z/2 + Z/4\n");
    }
}
