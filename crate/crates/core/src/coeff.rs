//! Covariant coefficient systems and Mackey functors on the orbit category,
//! stored as complete matrix tables over an exact ring.
//!
//! Values are free modules with chosen bases; a system assigns every orbit
//! morphism α: G/H → G/K a rank(K) × rank(H) matrix acting on column
//! vectors. Systems can be supplied on a generating set (one-step
//! projections plus right translations) and are completed by factoring each
//! morphism through those generators.

use crate::group::{Group, Subgroup};
use crate::gset::GSet;
use crate::matrix::Mat;
use crate::orbit::{MorphismSpec, OrbitCategory, OrbitMorphism, SubgroupId};
use crate::ring::{Ring, Scalar};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoeffError {
    #[error("rank table has {got} entries, expected one per subgroup ({expected})")]
    RankCountMismatch { got: usize, expected: usize },
    #[error("matrix for {morphism} is {rows}×{cols}, expected {expected_rows}×{expected_cols}")]
    RankMismatch {
        morphism: OrbitMorphism,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("matrix for {morphism} has non-integral entries over Z")]
    NonIntegralMatrix { morphism: OrbitMorphism },
    #[error("two generators for {morphism} disagree")]
    ConflictingGenerator { morphism: OrbitMorphism },
    #[error("no generator covers {morphism} (need one-step projections and right translations)")]
    MissingGenerator { morphism: OrbitMorphism },
    #[error("completed table violates functoriality:\n{report}")]
    Inconsistent { report: ValidationReport },
    #[error("ρ is not a representation (checked at pair g={g}, h={h})")]
    InvalidRepresentation { g: usize, h: usize },
    #[error("unknown subgroup id {0} in rank table")]
    UnknownSubgroup(usize),
    #[error("unknown builtin coefficient system `{0}`")]
    UnknownBuiltin(String),
}

/// One functoriality violation found by [`CoefficientSystem::validate`] or
/// [`MackeyFunctor::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingMorphism(OrbitMorphism),
    WrongShape(OrbitMorphism),
    IdentityNotIdentity(OrbitMorphism),
    /// matrices(outer ∘ inner) ≠ matrices(outer)·matrices(inner)
    CompositionMismatch { outer: OrbitMorphism, inner: OrbitMorphism },
    /// contravariant(outer ∘ inner) ≠ contravariant(inner)·contravariant(outer)
    ContravariantCompositionMismatch { outer: OrbitMorphism, inner: OrbitMorphism },
    /// covariant and contravariant matrices of a right translation are not
    /// mutually inverse
    NotMutuallyInverse(OrbitMorphism),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::MissingMorphism(m) => write!(f, "no matrix for {m:?}"),
            Violation::WrongShape(m) => write!(f, "wrong shape for {m:?}"),
            Violation::IdentityNotIdentity(m) => write!(f, "identity {m:?} is not the identity matrix"),
            Violation::CompositionMismatch { outer, inner } => {
                write!(f, "M(f∘g) ≠ M(f)M(g) for f = {outer:?}, g = {inner:?}")
            }
            Violation::ContravariantCompositionMismatch { outer, inner } => {
                write!(f, "M*(f∘g) ≠ M*(g)M*(f) for f = {outer:?}, g = {inner:?}")
            }
            Violation::NotMutuallyInverse(m) => {
                write!(f, "M(R) and M*(R) are not mutually inverse for translation {m:?}")
            }
        }
    }
}

/// Outcome of a functoriality check; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "- {v}")?;
        }
        Ok(())
    }
}

/// A covariant functor O(G) → (free modules over `ring`), as a full matrix
/// table.
#[derive(Clone, Debug)]
pub struct CoefficientSystem {
    orbit: Arc<OrbitCategory>,
    ring: Ring,
    ranks: Vec<usize>,
    matrices: BTreeMap<OrbitMorphism, Mat>,
}

/// JSON form of a system given by generators.
#[derive(Serialize, Deserialize)]
pub struct CoeffSpec {
    pub ring: Ring,
    /// subgroup id (as a decimal string key) → rank of M(G/H)
    pub ranks: BTreeMap<String, usize>,
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub morphism: MorphismSpec,
    pub matrix: Vec<Vec<i64>>,
}

impl CoefficientSystem {
    /// Completes a generator table to every orbit morphism. Any morphism
    /// factors as a right translation after a chain of one-step projections;
    /// those factors must be present among the generators. No functoriality
    /// check is run — see [`CoefficientSystem::from_generators`].
    pub fn complete_from_generators(
        orbit: Arc<OrbitCategory>,
        ring: Ring,
        ranks: Vec<usize>,
        generators: &[(OrbitMorphism, Mat)],
    ) -> Result<CoefficientSystem, CoeffError> {
        if ranks.len() != orbit.subgroup_count() {
            return Err(CoeffError::RankCountMismatch {
                got: ranks.len(),
                expected: orbit.subgroup_count(),
            });
        }
        let mut matrices: BTreeMap<OrbitMorphism, Mat> = BTreeMap::new();
        for (f, m) in generators {
            let (er, ec) = (ranks[f.target().index()], ranks[f.source().index()]);
            if m.rows() != er || m.cols() != ec {
                return Err(CoeffError::RankMismatch {
                    morphism: *f,
                    rows: m.rows(),
                    cols: m.cols(),
                    expected_rows: er,
                    expected_cols: ec,
                });
            }
            if ring == Ring::Integers && !m.has_integer_entries() {
                return Err(CoeffError::NonIntegralMatrix { morphism: *f });
            }
            let m = m.clone().normalized(&ring);
            if let Some(old) = matrices.get(f) {
                if *old != m {
                    return Err(CoeffError::ConflictingGenerator { morphism: *f });
                }
            }
            matrices.insert(*f, m);
        }
        for s in 0..orbit.subgroup_count() {
            let id = orbit.identity(SubgroupId(s)).expect("id in range");
            matrices.entry(id).or_insert_with(|| Mat::identity(ranks[s]));
        }
        for f in orbit.all_morphisms() {
            if matrices.contains_key(&f) {
                continue;
            }
            let (projection, translation) = orbit.factorize(&f).expect("valid morphism");
            let chain = orbit
                .projection_chain(projection.source(), projection.target())
                .expect("projection implies inclusion");
            let mut acc = Mat::identity(ranks[f.source().index()]);
            for step in chain.iter().chain(std::iter::once(&translation)) {
                let m = matrices
                    .get(step)
                    .ok_or(CoeffError::MissingGenerator { morphism: *step })?;
                acc = m.mul(&acc, &ring);
            }
            matrices.insert(f, acc);
        }
        Ok(CoefficientSystem { orbit, ring, ranks, matrices })
    }

    /// Completes the generators and rejects the result unless functoriality
    /// holds on every composable pair.
    pub fn from_generators(
        orbit: Arc<OrbitCategory>,
        ring: Ring,
        ranks: Vec<usize>,
        generators: &[(OrbitMorphism, Mat)],
    ) -> Result<CoefficientSystem, CoeffError> {
        let system = CoefficientSystem::complete_from_generators(orbit, ring, ranks, generators)?;
        let report = system.validate();
        if !report.is_valid() {
            return Err(CoeffError::Inconsistent { report });
        }
        Ok(system)
    }

    pub fn from_spec(orbit: Arc<OrbitCategory>, spec: &CoeffSpec) -> Result<CoefficientSystem, CoeffError> {
        let n = orbit.subgroup_count();
        let mut ranks = vec![usize::MAX; n];
        for (key, &rank) in &spec.ranks {
            let id: usize = key
                .parse()
                .map_err(|_| CoeffError::UnknownSubgroup(usize::MAX))?;
            if id >= n {
                return Err(CoeffError::UnknownSubgroup(id));
            }
            ranks[id] = rank;
        }
        if let Some(missing) = ranks.iter().position(|&r| r == usize::MAX) {
            return Err(CoeffError::RankCountMismatch { got: n - 1, expected: n })
                .map_err(|_| CoeffError::UnknownSubgroup(missing));
        }
        let mut generators = Vec::new();
        for g in &spec.generators {
            let f = orbit
                .from_spec(&g.morphism)
                .map_err(|_| CoeffError::MissingGenerator {
                    morphism: orbit.identity(SubgroupId(0)).expect("trivial subgroup"),
                })?;
            generators.push((f, Mat::from_rows_i64(&g.matrix)));
        }
        CoefficientSystem::from_generators(orbit, spec.ring, ranks, &generators)
    }

    pub fn orbit(&self) -> &Arc<OrbitCategory> {
        &self.orbit
    }

    pub fn group(&self) -> &Arc<Group> {
        self.orbit.group()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rank(&self, h: SubgroupId) -> usize {
        self.ranks[h.index()]
    }

    pub fn matrix(&self, f: &OrbitMorphism) -> &Mat {
        self.matrices.get(f).expect("coefficient systems are complete")
    }

    /// Convenience: the matrix of the right translation at (g, H).
    pub fn translation_matrix(&self, g: usize, h: SubgroupId) -> &Mat {
        let t = self.orbit.right_translation(g, h).expect("subgroup id in range");
        self.matrix(&t)
    }

    /// Checks the functor laws: a matrix of the right shape for every
    /// morphism, identity matrices on identities, and
    /// M(f∘g) = M(f)·M(g) for every composable pair.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let all = self.orbit.all_morphisms();
        for f in &all {
            match self.matrices.get(f) {
                None => {
                    violations.push(Violation::MissingMorphism(*f));
                    continue;
                }
                Some(m) => {
                    if m.rows() != self.ranks[f.target().index()]
                        || m.cols() != self.ranks[f.source().index()]
                    {
                        violations.push(Violation::WrongShape(*f));
                        continue;
                    }
                    if f.is_identity() && !m.is_identity() {
                        violations.push(Violation::IdentityNotIdentity(*f));
                    }
                }
            }
        }
        if !violations.is_empty() {
            return ValidationReport { violations };
        }
        for f in &all {
            for g in &all {
                if g.target() != f.source() {
                    continue;
                }
                let fg = self.orbit.compose(f, g).expect("composable");
                let product = self.matrix(f).mul(self.matrix(g), &self.ring);
                if product != *self.matrix(&fg) {
                    violations.push(Violation::CompositionMismatch { outer: *f, inner: *g });
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn to_spec(&self) -> Option<CoeffSpec> {
        let mut generators = Vec::new();
        for (f, m) in &self.matrices {
            if !m.has_integer_entries() {
                return None;
            }
            let matrix = (0..m.rows())
                .map(|i| {
                    (0..m.cols())
                        .map(|j| {
                            let v = m.get(i, j).to_integer();
                            i64::try_from(v).expect("entry fits in i64")
                        })
                        .collect()
                })
                .collect();
            generators.push(GeneratorSpec {
                morphism: MorphismSpec {
                    src: f.source().index(),
                    tgt: f.target().index(),
                    rep: f.rep(),
                },
                matrix,
            });
        }
        Some(CoeffSpec {
            ring: self.ring,
            ranks: self
                .ranks
                .iter()
                .enumerate()
                .map(|(i, &r)| (i.to_string(), r))
                .collect(),
            generators,
        })
    }
}

/// The constant system: every value is the ring itself, every map the
/// identity.
pub fn constant_system(orbit: Arc<OrbitCategory>, ring: Ring) -> CoefficientSystem {
    let ranks = vec![1; orbit.subgroup_count()];
    let matrices = orbit
        .all_morphisms()
        .into_iter()
        .map(|f| (f, Mat::identity(1)))
        .collect();
    CoefficientSystem { orbit, ring, ranks, matrices }
}

/// Index of the left coset containing `x`, in the order of
/// [`Group::left_cosets`].
fn coset_index(group: &Group, h: &Subgroup, x: usize) -> usize {
    let cosets = group.left_cosets(h);
    let target = group.coset_of(x, h);
    cosets
        .iter()
        .position(|(_, c)| *c == target)
        .expect("cosets partition the group")
}

/// The linearization system: M(G/H) is the free module on the cosets G/H,
/// and a morphism acts by the linear extension of the induced coset map.
pub fn linearization_system(orbit: Arc<OrbitCategory>, ring: Ring) -> CoefficientSystem {
    let group = orbit.group().clone();
    let subs = orbit.subgroups().to_vec();
    let ranks: Vec<usize> = subs.iter().map(|h| group.index_of(h)).collect();
    let mut matrices = BTreeMap::new();
    for f in orbit.all_morphisms() {
        let h = &subs[f.source().index()];
        let k = &subs[f.target().index()];
        let mut m = Mat::zeros(ranks[f.target().index()], ranks[f.source().index()]);
        for (col, (rep, _)) in group.left_cosets(h).into_iter().enumerate() {
            let image = group.mul(rep, f.rep());
            let row = coset_index(&group, k, image);
            m.set(row, col, Scalar::from_integer(1.into()));
        }
        matrices.insert(f, m.normalized(&ring));
    }
    CoefficientSystem { orbit, ring, ranks, matrices }
}

/// A Mackey functor: a covariant system plus compatible contravariant
/// matrices (transposed shapes), with translations mutually inverse.
#[derive(Clone, Debug)]
pub struct MackeyFunctor {
    covariant: CoefficientSystem,
    contravariant: BTreeMap<OrbitMorphism, Mat>,
}

impl MackeyFunctor {
    pub fn covariant(&self) -> &CoefficientSystem {
        &self.covariant
    }

    pub fn orbit(&self) -> &Arc<OrbitCategory> {
        self.covariant.orbit()
    }

    pub fn ring(&self) -> Ring {
        self.covariant.ring()
    }

    pub fn rank(&self, h: SubgroupId) -> usize {
        self.covariant.rank(h)
    }

    pub fn matrix(&self, f: &OrbitMorphism) -> &Mat {
        self.covariant.matrix(f)
    }

    pub fn contravariant_matrix(&self, f: &OrbitMorphism) -> &Mat {
        self.contravariant.get(f).expect("Mackey functors are complete")
    }

    /// Functor laws for both variances plus mutual inverses on right
    /// translations.
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.covariant.validate();
        let orbit = self.orbit();
        let ring = self.ring();
        let all = orbit.all_morphisms();
        for f in &all {
            match self.contravariant.get(f) {
                None => {
                    report.violations.push(Violation::MissingMorphism(*f));
                    return report;
                }
                Some(m) => {
                    if m.rows() != self.covariant.ranks[f.source().index()]
                        || m.cols() != self.covariant.ranks[f.target().index()]
                    {
                        report.violations.push(Violation::WrongShape(*f));
                        return report;
                    }
                    if f.is_identity() && !m.is_identity() {
                        report.violations.push(Violation::IdentityNotIdentity(*f));
                    }
                }
            }
        }
        for f in &all {
            for g in &all {
                if g.target() != f.source() {
                    continue;
                }
                let fg = orbit.compose(f, g).expect("composable");
                let product = self
                    .contravariant_matrix(g)
                    .mul(self.contravariant_matrix(f), &ring);
                if product != *self.contravariant_matrix(&fg) {
                    report
                        .violations
                        .push(Violation::ContravariantCompositionMismatch { outer: *f, inner: *g });
                }
            }
        }
        for h in 0..orbit.subgroup_count() {
            for g in orbit.group().elements() {
                let t = orbit.right_translation(g, SubgroupId(h)).expect("id in range");
                let co = self.matrix(&t);
                let contra = self.contravariant_matrix(&t);
                let forward = co.mul(contra, &ring);
                let backward = contra.mul(co, &ring);
                if !forward.is_identity() || !backward.is_identity() {
                    report.violations.push(Violation::NotMutuallyInverse(t));
                }
            }
        }
        report
    }

    /// True iff M_*(q)∘M^*(q) = [K:H]·id for every canonical projection q.
    pub fn is_homological(&self) -> bool {
        let orbit = self.orbit();
        let ring = self.ring();
        let subs = orbit.subgroups();
        for h in 0..subs.len() {
            for k in 0..subs.len() {
                if h == k || !subs[h].is_subset_of(&subs[k]) {
                    continue;
                }
                let q = orbit
                    .canonical_projection(SubgroupId(h), SubgroupId(k))
                    .expect("inclusion checked");
                let index = (subs[k].len() / subs[h].len()) as i64;
                let product = self
                    .matrix(&q)
                    .mul(self.contravariant_matrix(&q), &ring);
                let expected =
                    Mat::identity(self.rank(SubgroupId(k))).scale(&ring.from_i64(index), &ring);
                if product != expected {
                    return false;
                }
            }
        }
        true
    }

    /// Assemble a Mackey functor from a covariant system and a full table of
    /// contravariant matrices (one per orbit morphism), rejecting any table
    /// that breaks functoriality or mutual inverses on translations.
    pub fn from_parts(
        covariant: CoefficientSystem,
        contravariant: BTreeMap<OrbitMorphism, Mat>,
    ) -> Result<MackeyFunctor, CoeffError> {
        let m = MackeyFunctor { covariant, contravariant };
        let report = m.validate();
        if report.is_valid() {
            Ok(m)
        } else {
            Err(CoeffError::Inconsistent { report })
        }
    }

    /// Constant covariant part with identity contravariant maps. Valid, but
    /// not homological once some index [K:H] exceeds 1.
    pub fn constant(orbit: Arc<OrbitCategory>, ring: Ring) -> MackeyFunctor {
        let covariant = constant_system(orbit, ring);
        let contravariant = covariant
            .matrices
            .keys()
            .map(|f| (*f, Mat::identity(1)))
            .collect();
        MackeyFunctor { covariant, contravariant }
    }

    /// Linearization with contravariant maps the transposes of the covariant
    /// ones (summing over fibers of the coset map). Homological.
    pub fn linearization(orbit: Arc<OrbitCategory>, ring: Ring) -> MackeyFunctor {
        let covariant = linearization_system(orbit, ring);
        let contravariant = covariant
            .matrices
            .iter()
            .map(|(f, m)| (*f, m.transpose()))
            .collect();
        MackeyFunctor { covariant, contravariant }
    }
}

/// Coset representatives of H inside an overgroup K (H ⊆ K required).
fn coset_reps_within(group: &Group, k: &Subgroup, h: &Subgroup) -> Vec<usize> {
    let mut reps = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for &x in k.elements() {
        if seen.contains(&x) {
            continue;
        }
        reps.push(x);
        for &e in h.elements() {
            seen.push(group.mul(x, e));
        }
    }
    reps
}

/// The fixed-point Mackey functor of an integer representation ρ:
/// M(G/H) = L^H with the canonical kernel basis; projections act
/// contravariantly by inclusion and covariantly by the transfer
/// l ↦ Σ_{kH ∈ K/H} ρ(k)·l; translations act by ρ.
pub fn fixed_point_mackey(
    orbit: Arc<OrbitCategory>,
    rho: &[Mat],
    ring: Ring,
) -> Result<MackeyFunctor, CoeffError> {
    let group = orbit.group().clone();
    let order = group.order();
    if rho.len() != order {
        return Err(CoeffError::InvalidRepresentation { g: 0, h: 0 });
    }
    let dim = rho.first().map_or(0, Mat::rows);
    for (g, m) in rho.iter().enumerate() {
        if m.rows() != dim || m.cols() != dim || !m.has_integer_entries() {
            return Err(CoeffError::InvalidRepresentation { g, h: g });
        }
    }
    let rho: Vec<Mat> = rho.iter().cloned().map(|m| m.normalized(&ring)).collect();
    if !rho[0].is_identity() {
        return Err(CoeffError::InvalidRepresentation { g: 0, h: 0 });
    }
    for g in 0..order {
        for h in 0..order {
            if rho[g].mul(&rho[h], &ring) != rho[group.mul(g, h)] {
                return Err(CoeffError::InvalidRepresentation { g, h });
            }
        }
    }

    let subs = orbit.subgroups().to_vec();
    // basis of L^H: kernel of the stacked (ρ(h) − I)
    let bases: Vec<Mat> = subs
        .iter()
        .map(|sub| {
            let blocks: Vec<Mat> = sub
                .elements()
                .iter()
                .map(|&h| rho[h].sub(&Mat::identity(dim), &ring))
                .collect();
            let refs: Vec<&Mat> = blocks.iter().collect();
            Mat::stack(&refs).kernel_basis(&ring)
        })
        .collect();
    let ranks: Vec<usize> = bases.iter().map(Mat::cols).collect();

    let mut matrices = BTreeMap::new();
    let mut contravariant = BTreeMap::new();
    for f in orbit.all_morphisms() {
        let a = f.rep();
        let h = &subs[f.source().index()];
        let k = &subs[f.target().index()];
        let k_conj = group.conjugate(k, a);
        // covariant: transfer K'/H then translate by ρ(a⁻¹)
        let mut transfer = Mat::zeros(dim, dim);
        for rep in coset_reps_within(&group, &k_conj, h) {
            transfer = transfer.add(&rho[rep], &ring);
        }
        let co_ambient = rho[group.inv(a)].mul(&transfer, &ring);
        let b_h = &bases[f.source().index()];
        let b_k = &bases[f.target().index()];
        let co = b_k
            .solve(&co_ambient.mul(b_h, &ring), &ring)
            .expect("transfer lands in the fixed lattice");
        matrices.insert(f, co.normalized(&ring));
        // contravariant: translate by ρ(a), land inside L^H
        let contra_ambient = rho[a].mul(b_k, &ring);
        let contra = b_h
            .solve(&contra_ambient, &ring)
            .expect("translated fixed vectors stay fixed");
        contravariant.insert(f, contra.normalized(&ring));
    }
    let covariant = CoefficientSystem { orbit, ring, ranks, matrices };
    Ok(MackeyFunctor { covariant, contravariant })
}

/// Permutation matrices of the action of G on a finite G-set.
pub fn permutation_representation(s: &GSet) -> Vec<Mat> {
    let n = s.size();
    s.group()
        .elements()
        .map(|g| Mat::from_fn(n, n, |i, j| if s.act(g, j) == i { Scalar::from_integer(1.into()) } else { Scalar::from_integer(0.into()) }))
        .collect()
}

/// Permutation matrices of G acting on itself.
pub fn regular_representation(group: &Arc<Group>) -> Vec<Mat> {
    permutation_representation(&GSet::regular(group.clone()))
}

/// Builtin Mackey functors, selected by name:
/// `constant`, `linearization`, `fixed_point_trivial`, `fixed_point_regular`.
pub fn builtin_mackey(
    name: &str,
    orbit: Arc<OrbitCategory>,
    ring: Ring,
) -> Result<MackeyFunctor, CoeffError> {
    match name {
        "constant" => Ok(MackeyFunctor::constant(orbit, ring)),
        "linearization" => Ok(MackeyFunctor::linearization(orbit, ring)),
        "fixed_point_trivial" => {
            let rho = vec![Mat::identity(1); orbit.group().order()];
            fixed_point_mackey(orbit, &rho, ring)
        }
        "fixed_point_regular" => {
            let rho = regular_representation(orbit.group());
            fixed_point_mackey(orbit, &rho, ring)
        }
        other => Err(CoeffError::UnknownBuiltin(other.to_string())),
    }
}

pub const BUILTIN_COEFF_NAMES: [&str; 4] =
    ["constant", "linearization", "fixed_point_trivial", "fixed_point_regular"];

/// A random Mackey functor: the fixed-point functor of the permutation
/// representation of a random G-set.
pub fn random_mackey<R: Rng>(
    orbit: Arc<OrbitCategory>,
    ring: Ring,
    rng: &mut R,
) -> MackeyFunctor {
    let group = orbit.group().clone();
    let subs = group.all_subgroups();
    let count = rng.gen_range(1..=3);
    let picks: Vec<Subgroup> =
        (0..count).map(|_| subs[rng.gen_range(0..subs.len())].clone()).collect();
    let blocks: Vec<GSet> = picks.iter().map(|h| GSet::cosets(group.clone(), h)).collect();
    // permutation representation of the disjoint union
    let total: usize = blocks.iter().map(GSet::size).sum();
    let rho: Vec<Mat> = group
        .elements()
        .map(|g| {
            let mut m = Mat::zeros(total, total);
            let mut offset = 0;
            for b in &blocks {
                for j in 0..b.size() {
                    m.set(offset + b.act(g, j), offset + j, Scalar::from_integer(1.into()));
                }
                offset += b.size();
            }
            m
        })
        .collect();
    fixed_point_mackey(orbit, &rho, ring).expect("permutation representations are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    fn orbit_of(g: Group) -> Arc<OrbitCategory> {
        Arc::new(OrbitCategory::new(Arc::new(g)))
    }

    #[test]
    fn constant_system_is_valid_and_translation_trivial() {
        for g in [Group::trivial(), Group::cyclic(4), Group::symmetric_3(), Group::klein_four()] {
            let orbit = orbit_of(g);
            let m = constant_system(orbit.clone(), Ring::Integers);
            assert!(m.validate().is_valid());
            for h in 0..orbit.subgroup_count() {
                for g in orbit.group().elements() {
                    assert!(m.translation_matrix(g, SubgroupId(h)).is_identity());
                }
            }
        }
    }

    #[test]
    fn zeroing_one_matrix_breaks_composition() {
        let orbit = orbit_of(Group::symmetric_3());
        let mut m = constant_system(orbit.clone(), Ring::Integers);
        // zero out a non-identity endomorphism of G/e (an isomorphism)
        let f = *m
            .matrices
            .keys()
            .find(|f| !f.is_identity() && f.source() == f.target())
            .unwrap();
        m.matrices.insert(f, Mat::zeros(1, 1));
        let report = m.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::CompositionMismatch { .. })));
    }

    #[test]
    fn linearization_is_valid_with_expected_ranks() {
        for g in [Group::symmetric_3(), Group::cyclic(6), Group::dihedral(4)] {
            let orbit = orbit_of(g);
            let m = linearization_system(orbit.clone(), Ring::Integers);
            assert!(m.validate().is_valid());
            assert_eq!(m.rank(orbit.trivial_id()), orbit.group().order());
            assert_eq!(m.rank(orbit.full_id()), 1);
        }
    }

    #[test]
    fn completion_from_minimal_generators_recovers_constant() {
        let orbit = orbit_of(Group::symmetric_3());
        let full = constant_system(orbit.clone(), Ring::Integers);
        // keep only one-step projections and right translations
        let mut gens = Vec::new();
        for h in 0..orbit.subgroup_count() {
            for g in orbit.group().elements() {
                let t = orbit.right_translation(g, SubgroupId(h)).unwrap();
                gens.push((t, Mat::identity(1)));
            }
        }
        let subs = orbit.subgroups().to_vec();
        for h in 0..subs.len() {
            for k in 0..subs.len() {
                if h != k && subs[h].is_subset_of(&subs[k]) {
                    let chain = orbit.projection_chain(SubgroupId(h), SubgroupId(k)).unwrap();
                    if chain.len() == 1 {
                        gens.push((chain[0], Mat::identity(1)));
                    }
                }
            }
        }
        let rebuilt = CoefficientSystem::from_generators(
            orbit.clone(),
            Ring::Integers,
            vec![1; orbit.subgroup_count()],
            &gens,
        )
        .unwrap();
        assert_eq!(rebuilt.matrices, full.matrices);
    }

    #[test]
    fn inconsistent_generators_are_rejected() {
        let orbit = orbit_of(Group::cyclic(2));
        // translation at G/e by the involution mapped to [2]: composing with
        // itself must give the identity, but gives [4]
        let t = orbit.right_translation(1, orbit.trivial_id()).unwrap();
        let mut gens = vec![(t, Mat::from_rows_i64(&[vec![2]]))];
        for h in 0..orbit.subgroup_count() {
            let full = orbit.full_id();
            if SubgroupId(h) != full {
                gens.push((
                    orbit.canonical_projection(SubgroupId(h), full).unwrap(),
                    Mat::identity(1),
                ));
            }
        }
        let err = CoefficientSystem::from_generators(orbit.clone(), Ring::Integers, vec![1, 1], &gens)
            .unwrap_err();
        assert!(matches!(err, CoeffError::Inconsistent { .. }));
    }

    #[test]
    fn missing_generators_are_reported() {
        let orbit = orbit_of(Group::cyclic(2));
        let err = CoefficientSystem::from_generators(orbit, Ring::Integers, vec![1, 1], &[])
            .unwrap_err();
        assert!(matches!(err, CoeffError::MissingGenerator { .. }));
    }

    #[test]
    fn fixed_point_trivial_action_gives_index_transfer() {
        let orbit = orbit_of(Group::symmetric_3());
        let rho = vec![Mat::identity(1); 6];
        let m = fixed_point_mackey(orbit.clone(), &rho, Ring::Integers).unwrap();
        assert!(m.validate().is_valid());
        let q = orbit.canonical_projection(orbit.trivial_id(), orbit.full_id()).unwrap();
        assert_eq!(*m.matrix(&q), Mat::from_rows_i64(&[vec![6]]));
        assert!(m.contravariant_matrix(&q).is_identity());
        assert!(m.is_homological());
    }

    #[test]
    fn sign_action_has_no_fixed_vectors() {
        let orbit = orbit_of(Group::cyclic(2));
        let rho = vec![Mat::identity(1), Mat::from_rows_i64(&[vec![-1]])];
        let m = fixed_point_mackey(orbit.clone(), &rho, Ring::Integers).unwrap();
        assert!(m.validate().is_valid());
        assert_eq!(m.rank(orbit.trivial_id()), 1);
        assert_eq!(m.rank(orbit.full_id()), 0);
        // over F2 the sign action is trivial, so the fixed module is everything
        let m2 = fixed_point_mackey(orbit.clone(), &rho, Ring::prime_field(2).unwrap()).unwrap();
        assert_eq!(m2.rank(orbit.full_id()), 1);
        assert!(m2.validate().is_valid());
    }

    #[test]
    fn fixed_point_regular_representation_is_valid_and_homological() {
        for g in [Group::symmetric_3(), Group::klein_four()] {
            let orbit = orbit_of(g);
            for ring in [Ring::Integers, Ring::Rationals, Ring::prime_field(2).unwrap()] {
                let rho = regular_representation(orbit.group());
                let m = fixed_point_mackey(orbit.clone(), &rho, ring).unwrap();
                assert!(m.validate().is_valid(), "ring {ring}");
                assert!(m.is_homological(), "ring {ring}");
            }
        }
    }

    #[test]
    fn invalid_representations_are_rejected() {
        let orbit = orbit_of(Group::cyclic(2));
        // not a homomorphism: the involution squared is not the identity
        let rho = vec![Mat::identity(2), Mat::from_rows_i64(&[vec![0, 1], vec![0, 0]])];
        assert!(matches!(
            fixed_point_mackey(orbit.clone(), &rho, Ring::Integers),
            Err(CoeffError::InvalidRepresentation { .. })
        ));
        let rho = vec![Mat::identity(2)];
        assert!(matches!(
            fixed_point_mackey(orbit, &rho, Ring::Integers),
            Err(CoeffError::InvalidRepresentation { .. })
        ));
    }

    #[test]
    fn homological_classification_of_builtins() {
        let orbit = orbit_of(Group::cyclic(2));
        assert!(!MackeyFunctor::constant(orbit.clone(), Ring::Integers).is_homological());
        assert!(MackeyFunctor::linearization(orbit.clone(), Ring::Integers).is_homological());
        // trivial group: every Mackey functor is homological
        let trivial = orbit_of(Group::trivial());
        assert!(MackeyFunctor::constant(trivial, Ring::Integers).is_homological());
    }

    #[test]
    fn zero_contravariant_functor_is_valid_but_not_homological() {
        // covariant constant; contravariant identity on isomorphisms and
        // zero elsewhere — then M_*(q)·M^*(q) = 0 while [K:H] = 2
        let orbit = orbit_of(Group::cyclic(2));
        let covariant = constant_system(orbit.clone(), Ring::Integers);
        let subs = orbit.subgroups().to_vec();
        let contravariant = covariant
            .matrices
            .keys()
            .map(|f| {
                let iso = subs[f.source().index()].len() == subs[f.target().index()].len();
                (*f, if iso { Mat::identity(1) } else { Mat::zeros(1, 1) })
            })
            .collect();
        let m = MackeyFunctor { covariant, contravariant };
        assert!(m.validate().is_valid());
        assert!(!m.is_homological());
    }

    #[test]
    fn broken_mutual_inverse_is_reported() {
        let orbit = orbit_of(Group::cyclic(3));
        let mut m = MackeyFunctor::constant(orbit.clone(), Ring::Integers);
        let t = orbit.right_translation(1, orbit.trivial_id()).unwrap();
        m.contravariant.insert(t, Mat::from_rows_i64(&[vec![-1]]));
        let report = m.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotMutuallyInverse(_))));
    }

    #[test]
    fn mackey_builtins_validate_on_small_groups() {
        for g in [Group::trivial(), Group::cyclic(2), Group::cyclic(6), Group::symmetric_3(), Group::klein_four(), Group::dihedral(4), Group::cyclic(12)] {
            let orbit = orbit_of(g);
            for name in BUILTIN_COEFF_NAMES {
                let m = builtin_mackey(name, orbit.clone(), Ring::Integers).unwrap();
                assert!(m.validate().is_valid(), "{name}");
            }
        }
        assert!(matches!(
            builtin_mackey("nope", orbit_of(Group::trivial()), Ring::Integers),
            Err(CoeffError::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn random_mackey_functors_validate() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for g in [Group::cyclic(4), Group::symmetric_3()] {
            let orbit = orbit_of(g);
            for ring in [Ring::Integers, Ring::prime_field(3).unwrap()] {
                for _ in 0..3 {
                    let m = random_mackey(orbit.clone(), ring, &mut rng);
                    assert!(m.validate().is_valid());
                    assert!(m.is_homological());
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let orbit = orbit_of(Group::symmetric_3());
        let m = linearization_system(orbit.clone(), Ring::Integers);
        let spec = m.to_spec().unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let parsed: CoeffSpec = serde_json::from_str(&text).unwrap();
        let rebuilt = CoefficientSystem::from_spec(orbit, &parsed).unwrap();
        assert_eq!(rebuilt.matrices, m.matrices);
        assert_eq!(rebuilt.ranks, m.ranks);
    }

    #[test]
    fn rank_tables_must_cover_every_subgroup() {
        let orbit = orbit_of(Group::cyclic(2));
        let spec = CoeffSpec {
            ring: Ring::Integers,
            ranks: [("0".to_string(), 1)].into_iter().collect(),
            generators: vec![],
        };
        assert!(matches!(
            CoefficientSystem::from_spec(orbit, &spec),
            Err(CoeffError::UnknownSubgroup(1))
        ));
    }
}
