//! Transfers along n-fold coverings of finite G-sets.
//!
//! An n-fold G-covering is an equivariant surjection p: E → X all of whose
//! fibers have exactly n points. With Mackey functor coefficients it induces
//! a wrong-way map t_p: F^G(X⁺, M) → F^G(E⁺, M) running against the usual
//! pushforward: on a generator γ_x(l) it sums, over the G_x-orbits of the
//! fiber over x, the generator at the orbit representative with coordinate
//! restricted contravariantly along the isotropy inclusion.
//!
//! [`check_axioms`] evaluates the expected identities — normalization,
//! compatibility with pullbacks, functoriality in the covering, and the
//! degree formula p⁺_* ∘ t_p = n·id — on the whole γ-basis of every space
//! involved. The degree formula characterizes homological Mackey functors,
//! so the report can legitimately contain failures.
//!
//! [`SimplicialGCovering`] is the levelwise analogue for simplicial G-sets;
//! [`transfer_chain_map`] produces the induced chain-level transfer.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{CoefficientSystem, MackeyFunctor};
use crate::fgroup::{pushforward_g, FError, FGElement};
use crate::group::{Group, Subgroup};
use crate::gset::{add_basepoint, GSet, GSetError, PointedGMap, PointedGSet};
use crate::homology::{chain_complex, HomologyError};
use crate::matrix::Mat;
use crate::ring::Scalar;
use crate::simplicial::{SimplicialGMap, SimplicialGSet};

#[derive(Error, Debug)]
pub enum TransferError {
    #[error("projection is not an n-fold covering: {0}")]
    NotACovering(String),
    #[error("operands live over different groups")]
    GroupMismatch,
    #[error("operands live over different spaces")]
    SpaceMismatch,
    #[error("element coefficients do not match the Mackey functor")]
    CoefficientMismatch,
    #[error("simplicial map is not a levelwise covering: {0}")]
    NotLevelwiseCovering(String),
    #[error(transparent)]
    Module(#[from] FError),
    #[error(transparent)]
    Space(#[from] GSetError),
    #[error(transparent)]
    Chain(#[from] HomologyError),
}

/// An equivariant map of unpointed finite G-sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMap {
    source: Arc<GSet>,
    target: Arc<GSet>,
    values: Vec<usize>,
}

impl GMap {
    pub fn new(
        source: Arc<GSet>,
        target: Arc<GSet>,
        values: Vec<usize>,
    ) -> Result<GMap, GSetError> {
        if source.group() != target.group() {
            return Err(GSetError::GroupMismatch);
        }
        if values.len() != source.size() {
            return Err(GSetError::WrongLength { len: values.len(), size: source.size() });
        }
        for &v in &values {
            if v >= target.size() {
                return Err(GSetError::ValueOutOfRange { value: v, size: target.size() });
            }
        }
        for g in source.group().elements() {
            for x in 0..source.size() {
                if values[source.act(g, x)] != target.act(g, values[x]) {
                    return Err(GSetError::NotEquivariant { g, x });
                }
            }
        }
        Ok(GMap { source, target, values })
    }

    pub fn identity(s: &Arc<GSet>) -> GMap {
        GMap { source: s.clone(), target: s.clone(), values: (0..s.size()).collect() }
    }

    pub fn source(&self) -> &Arc<GSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GSet> {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn compose(outer: &GMap, inner: &GMap) -> Result<GMap, GSetError> {
        if inner.target != outer.source {
            return Err(GSetError::GroupMismatch);
        }
        Ok(GMap {
            source: inner.source.clone(),
            target: outer.target.clone(),
            values: inner.values.iter().map(|&x| outer.values[x]).collect(),
        })
    }
}

/// Extends an unpointed equivariant map to the basepoint-adjoined spaces.
pub fn plus_map(f: &GMap) -> PointedGMap {
    let source = Arc::new(add_basepoint(f.source()));
    let target = Arc::new(add_basepoint(f.target()));
    let mut values = f.values.clone();
    values.push(target.basepoint());
    PointedGMap::new(source, target, values)
        .expect("adjoining basepoints preserves equivariance")
}

/// The disjoint union of G-sets over a common group, blocks in order.
pub fn disjoint_union(group: Arc<Group>, parts: &[GSet]) -> Result<GSet, GSetError> {
    for p in parts {
        if p.group() != &group {
            return Err(GSetError::GroupMismatch);
        }
    }
    let total: usize = parts.iter().map(GSet::size).sum();
    let action = group
        .elements()
        .map(|g| {
            let mut row = Vec::with_capacity(total);
            let mut offset = 0;
            for p in parts {
                for x in 0..p.size() {
                    row.push(offset + p.act(g, x));
                }
                offset += p.size();
            }
            row
        })
        .collect();
    GSet::new(group, action)
}

/// The stabilizer of a point of an unpointed G-set.
fn stabilizer(s: &GSet, x: usize) -> Subgroup {
    let fixers: Vec<usize> = s.group().elements().filter(|&g| s.act(g, x) == x).collect();
    s.group().subgroup_from_elements(&fixers).expect("stabilizers are subgroups")
}

/// An n-fold covering of finite G-sets: an equivariant projection all of
/// whose fibers have exactly n points. The basepoint-adjoined spaces are
/// cached because the transfer operates on F^G of those.
#[derive(Clone, Debug)]
pub struct GCovering {
    total: Arc<GSet>,
    base: Arc<GSet>,
    proj: Vec<usize>,
    n: usize,
    total_plus: Arc<PointedGSet>,
    base_plus: Arc<PointedGSet>,
}

impl GCovering {
    pub fn new(
        total: Arc<GSet>,
        base: Arc<GSet>,
        proj: Vec<usize>,
    ) -> Result<GCovering, TransferError> {
        if total.group() != base.group() {
            return Err(TransferError::GroupMismatch);
        }
        if proj.len() != total.size() {
            return Err(TransferError::NotACovering(format!(
                "projection has {} values, total space has {} points",
                proj.len(),
                total.size()
            )));
        }
        let mut counts = vec![0usize; base.size()];
        for &x in &proj {
            if x >= base.size() {
                return Err(TransferError::NotACovering(format!(
                    "projection value {x} out of range for base of size {}",
                    base.size()
                )));
            }
            counts[x] += 1;
        }
        for g in total.group().elements() {
            for e in 0..total.size() {
                if proj[total.act(g, e)] != base.act(g, proj[e]) {
                    return Err(TransferError::NotACovering(format!(
                        "projection is not equivariant at (g={g}, e={e})"
                    )));
                }
            }
        }
        // over the empty base the degree is 1 by convention
        let n = counts.first().copied().unwrap_or(1);
        if n == 0 {
            return Err(TransferError::NotACovering("the fiber over point 0 is empty".into()));
        }
        for (x, &c) in counts.iter().enumerate() {
            if c != n {
                return Err(TransferError::NotACovering(format!(
                    "fiber over {x} has {c} points, fiber over 0 has {n}"
                )));
            }
        }
        let total_plus = Arc::new(add_basepoint(&total));
        let base_plus = Arc::new(add_basepoint(&base));
        Ok(GCovering { total, base, proj, n, total_plus, base_plus })
    }

    /// The identity covering of a G-set (degree 1).
    pub fn identity(x: &Arc<GSet>) -> GCovering {
        GCovering::new(x.clone(), x.clone(), (0..x.size()).collect())
            .expect("the identity projection is a 1-fold covering")
    }

    /// The trivial n-fold covering X × {1,…,n} → X, sheets stacked as
    /// consecutive blocks.
    pub fn trivial(x: &Arc<GSet>, n: usize) -> Result<GCovering, TransferError> {
        let size = x.size();
        let group = x.group().clone();
        let action = group
            .elements()
            .map(|g| (0..n * size).map(|e| (e / size) * size + x.act(g, e % size)).collect())
            .collect();
        let total = Arc::new(GSet::new(group, action).expect("sheetwise actions are valid"));
        GCovering::new(total, x.clone(), (0..n * size).map(|e| e % size).collect())
    }

    /// Composes two coverings F → E and E → X into a covering F → X of
    /// degree the product.
    pub fn compose(outer: &GCovering, inner: &GCovering) -> Result<GCovering, TransferError> {
        if *inner.base != *outer.total {
            return Err(TransferError::SpaceMismatch);
        }
        let proj = inner.proj.iter().map(|&e| outer.proj[e]).collect();
        GCovering::new(inner.total.clone(), outer.base.clone(), proj)
    }

    /// Pulls a covering p: E → X back along f: Y → X. Returns the covering
    /// f*E → Y together with the induced map f*E → E; the pullback points
    /// are the pairs (y, e) with f(y) = p(e) in lexicographic order.
    pub fn pullback(p: &GCovering, f: &GMap) -> Result<(GCovering, GMap), TransferError> {
        if **f.target() != *p.base {
            return Err(TransferError::SpaceMismatch);
        }
        let y_space = f.source();
        let mut points: Vec<(usize, usize)> = Vec::new();
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for y in 0..y_space.size() {
            for e in 0..p.total.size() {
                if p.proj[e] == f.apply(y) {
                    index.insert((y, e), points.len());
                    points.push((y, e));
                }
            }
        }
        let group = p.total.group().clone();
        let action: Vec<Vec<usize>> = group
            .elements()
            .map(|g| {
                points
                    .iter()
                    .map(|&(y, e)| index[&(y_space.act(g, y), p.total.act(g, e))])
                    .collect()
            })
            .collect();
        let pulled = Arc::new(GSet::new(group, action)?);
        let proj = points.iter().map(|&(y, _)| y).collect();
        let over = points.iter().map(|&(_, e)| e).collect();
        let covering = GCovering::new(pulled.clone(), y_space.clone(), proj)?;
        let tilde = GMap::new(pulled, p.total.clone(), over)?;
        Ok((covering, tilde))
    }

    pub fn total(&self) -> &Arc<GSet> {
        &self.total
    }

    pub fn base(&self) -> &Arc<GSet> {
        &self.base
    }

    pub fn projection(&self) -> &[usize] {
        &self.proj
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn total_plus(&self) -> &Arc<PointedGSet> {
        &self.total_plus
    }

    pub fn base_plus(&self) -> &Arc<PointedGSet> {
        &self.base_plus
    }

    /// The projection as a map of unpointed G-sets.
    pub fn projection_map(&self) -> GMap {
        GMap { source: self.total.clone(), target: self.base.clone(), values: self.proj.clone() }
    }

    /// The projection E⁺ → X⁺ of the basepoint-adjoined spaces.
    pub fn projection_plus(&self) -> PointedGMap {
        let mut values = self.proj.clone();
        values.push(self.base_plus.basepoint());
        PointedGMap::new(self.total_plus.clone(), self.base_plus.clone(), values)
            .expect("validated covering projections are equivariant")
    }

    pub fn from_spec(group: Arc<Group>, spec: &CoveringSpec) -> Result<GCovering, TransferError> {
        let total = Arc::new(GSet::new(group.clone(), spec.total.clone())?);
        let base = Arc::new(GSet::new(group, spec.base.clone())?);
        GCovering::new(total, base, spec.projection.clone())
    }

    pub fn to_spec(&self) -> CoveringSpec {
        let table = |s: &GSet| {
            (0..s.group().order())
                .map(|g| (0..s.size()).map(|x| s.act(g, x)).collect())
                .collect()
        };
        CoveringSpec {
            total: table(&self.total),
            base: table(&self.base),
            projection: self.proj.clone(),
        }
    }
}

/// JSON form of a covering: `{"total": [[...]], "base": [[...]],
/// "projection": [...]}` with the action tables indexed `[g][point]`.
#[derive(Serialize, Deserialize)]
pub struct CoveringSpec {
    pub total: Vec<Vec<usize>>,
    pub base: Vec<Vec<usize>>,
    pub projection: Vec<usize>,
}

/// The transfer t_p: F^G(X⁺, M) → F^G(E⁺, M) of an n-fold covering
/// p: E → X with coefficients in a Mackey functor M.
pub struct Transfer {
    covering: GCovering,
    system: Arc<CoefficientSystem>,
    mackey: MackeyFunctor,
}

impl Transfer {
    pub fn new(p: &GCovering, m: &MackeyFunctor) -> Result<Transfer, TransferError> {
        if m.orbit().group() != p.base.group() {
            return Err(TransferError::GroupMismatch);
        }
        Ok(Transfer {
            covering: p.clone(),
            system: Arc::new(m.covariant().clone()),
            mackey: m.clone(),
        })
    }

    /// The covariant part of the coefficients, shared so transferred
    /// elements can be compared and combined.
    pub fn system(&self) -> &Arc<CoefficientSystem> {
        &self.system
    }

    pub fn covering(&self) -> &GCovering {
        &self.covering
    }

    /// On γ_x(l) with l ∈ M(G/G_x): the sum over G_x-orbit representatives
    /// y of the fiber over x of γ_y(M^*(q_y)(l)), where q_y: G/G_y → G/G_x
    /// is the orbit projection of the inclusion G_y ⊆ G_x. Extended
    /// additively; elements must live on the covering's base with the
    /// functor's coefficients.
    pub fn apply(&self, v: &FGElement) -> Result<FGElement, TransferError> {
        if **v.space() != *self.covering.base_plus {
            return Err(TransferError::SpaceMismatch);
        }
        let orbit = self.mackey.orbit().clone();
        if v.system().ring() != self.mackey.ring() || v.system().group() != orbit.group() {
            return Err(TransferError::CoefficientMismatch);
        }
        for h in 0..orbit.subgroup_count() {
            let id = crate::orbit::SubgroupId(h);
            if v.system().rank(id) != self.mackey.rank(id) {
                return Err(TransferError::CoefficientMismatch);
            }
        }
        let ring = self.mackey.ring();
        let total = &self.covering.total;
        let base_plus = &self.covering.base_plus;
        let total_plus = &self.covering.total_plus;
        let mut out = FGElement::zero(self.system.clone(), total_plus.clone());
        for (&x, l) in v.support() {
            let g_x = base_plus.isotropy(x);
            let x_id = orbit.id_of(&g_x).expect("isotropy subgroups are orbit objects");
            let mut seen = vec![false; total.size()];
            for e in 0..total.size() {
                if self.covering.proj[e] != x || seen[e] {
                    continue;
                }
                for &h in g_x.elements() {
                    seen[total.act(h, e)] = true;
                }
                let e_id = orbit
                    .id_of(&total_plus.isotropy(e))
                    .expect("isotropy subgroups are orbit objects");
                let q = orbit
                    .canonical_projection(e_id, x_id)
                    .expect("fiber isotropy sits inside the base isotropy");
                let restricted = self.mackey.contravariant_matrix(&q).apply(l, &ring);
                let term = FGElement::generator(&self.system, total_plus, &restricted, e)?;
                out = out.add(&term)?;
            }
        }
        Ok(out)
    }
}

/// One-shot transfer of a single element.
pub fn transfer(
    p: &GCovering,
    m: &MackeyFunctor,
    v: &FGElement,
) -> Result<FGElement, TransferError> {
    Transfer::new(p, m)?.apply(v)
}

/// The γ-basis of F^G(S, M): one generator per non-basepoint orbit and unit
/// coordinate vector at its minimal representative.
pub fn standard_basis(
    system: &Arc<CoefficientSystem>,
    space: &Arc<PointedGSet>,
) -> Vec<FGElement> {
    let ring = system.ring();
    let orbit = system.orbit();
    let mut out = Vec::new();
    for (rep, _) in space.orbits() {
        if rep == space.basepoint() {
            continue;
        }
        let rank = system
            .rank(orbit.id_of(&space.isotropy(rep)).expect("isotropy subgroups are orbit objects"));
        for k in 0..rank {
            let l: Vec<Scalar> =
                (0..rank).map(|i| ring.from_i64(if i == k { 1 } else { 0 })).collect();
            out.push(
                FGElement::generator(system, space, &l, rep)
                    .expect("unit vectors have the right rank"),
            );
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferAxiom {
    /// The transfer of an identity covering is the identity.
    Normalization,
    /// Transfers commute with pullback squares.
    Pullback,
    /// The transfer of a composite covering is the composite of transfers.
    Functoriality,
    /// p⁺_* ∘ t_p is multiplication by the covering degree.
    Degree,
}

impl fmt::Display for TransferAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TransferAxiom::Normalization => "normalization",
            TransferAxiom::Pullback => "pullback",
            TransferAxiom::Functoriality => "functoriality",
            TransferAxiom::Degree => "degree",
        };
        write!(f, "{name}")
    }
}

#[derive(Clone, Debug)]
pub struct AxiomCheck {
    pub axiom: TransferAxiom,
    pub description: String,
    pub passed: bool,
    /// A basis element on which the identity fails, when one exists.
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "[{status}] {}: {}", c.axiom, c.description)?;
            if let Some(w) = &c.witness {
                write!(f, " (witness: {w})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn describe(p: &GCovering) -> String {
    format!(
        "degree-{} covering of a {}-point base by a {}-point total space",
        p.n,
        p.base.size(),
        p.total.size()
    )
}

fn first_mismatch(
    basis: &[FGElement],
    mut pair: impl FnMut(&FGElement) -> Result<(FGElement, FGElement), TransferError>,
) -> Result<Option<String>, TransferError> {
    for v in basis {
        let (lhs, rhs) = pair(v)?;
        if lhs != rhs {
            return Ok(Some(format!(
                "γ with support {}: sides have supports {} and {}",
                render_support(v),
                render_support(&lhs),
                render_support(&rhs)
            )));
        }
    }
    Ok(None)
}

/// Formats an element's support as `{rep: [coords], ...}` with plain scalars.
fn render_support(v: &FGElement) -> String {
    let entries: Vec<String> = v
        .support()
        .iter()
        .map(|(rep, l)| {
            let coords: Vec<String> = l.iter().map(Scalar::to_string).collect();
            format!("{rep}: [{}]", coords.join(", "))
        })
        .collect();
    format!("{{{}}}", entries.join(", "))
}

/// Evaluates the transfer identities on the full γ-basis of every space
/// involved, for each covering in `coverings`, each pullback along a map in
/// `maps` whose target matches a covering's base, and each composable pair
/// of coverings. The degree identity is always evaluated even though it can
/// fail for non-homological Mackey functors; the report records the
/// outcome either way.
pub fn check_axioms(
    coverings: &[GCovering],
    maps: &[GMap],
    m: &MackeyFunctor,
) -> Result<AxiomReport, TransferError> {
    let group = m.orbit().group();
    for p in coverings {
        if p.base.group() != group {
            return Err(TransferError::GroupMismatch);
        }
    }
    for f in maps {
        if f.source().group() != group {
            return Err(TransferError::GroupMismatch);
        }
    }
    let mut checks = Vec::new();

    for p in coverings {
        let identity = GCovering::identity(&p.base);
        let t = Transfer::new(&identity, m)?;
        let basis = standard_basis(t.system(), &identity.base_plus);
        let witness =
            first_mismatch(&basis, |v| Ok((t.apply(v)?, v.clone())))?;
        checks.push(AxiomCheck {
            axiom: TransferAxiom::Normalization,
            description: format!("identity covering of the {}-point base of a {}", p.base.size(), describe(p)),
            passed: witness.is_none(),
            witness,
        });
    }

    for p in coverings {
        for f in maps {
            if **f.target() != *p.base {
                continue;
            }
            let (pulled, tilde) = GCovering::pullback(p, f)?;
            let tp = Transfer::new(p, m)?;
            let tq = Transfer::new(&pulled, m)?;
            let f_plus = plus_map(f);
            let tilde_plus = plus_map(&tilde);
            let basis = standard_basis(tq.system(), &pulled.base_plus);
            let witness = first_mismatch(&basis, |v| {
                let lhs = tp.apply(&pushforward_g(&f_plus, v))?;
                let rhs = pushforward_g(&tilde_plus, &tq.apply(v)?);
                Ok((lhs, rhs))
            })?;
            checks.push(AxiomCheck {
                axiom: TransferAxiom::Pullback,
                description: format!(
                    "{} pulled back along a map from a {}-point G-set",
                    describe(p),
                    f.source().size()
                ),
                passed: witness.is_none(),
                witness,
            });
        }
    }

    for p in coverings {
        for q in coverings {
            if *q.base != *p.total {
                continue;
            }
            let composite = GCovering::compose(p, q)?;
            let tp = Transfer::new(p, m)?;
            let tq = Transfer::new(q, m)?;
            let tpq = Transfer::new(&composite, m)?;
            let basis = standard_basis(tpq.system(), &composite.base_plus);
            let witness = first_mismatch(&basis, |v| {
                Ok((tpq.apply(v)?, tq.apply(&tp.apply(v)?)?))
            })?;
            checks.push(AxiomCheck {
                axiom: TransferAxiom::Functoriality,
                description: format!("a {} composed over a {}", describe(q), describe(p)),
                passed: witness.is_none(),
                witness,
            });
        }
    }

    for p in coverings {
        let t = Transfer::new(p, m)?;
        let proj_plus = p.projection_plus();
        let scale = m.ring().from_i64(p.n as i64);
        let basis = standard_basis(t.system(), &p.base_plus);
        let witness = first_mismatch(&basis, |v| {
            Ok((pushforward_g(&proj_plus, &t.apply(v)?), v.scale(&scale)))
        })?;
        checks.push(AxiomCheck {
            axiom: TransferAxiom::Degree,
            description: format!(
                "{} with {} coefficients",
                describe(p),
                if m.is_homological() { "homological" } else { "non-homological" }
            ),
            passed: witness.is_none(),
            witness,
        });
    }

    Ok(AxiomReport { checks })
}

fn coset_lookup(group: &Group, h: &Subgroup) -> Vec<usize> {
    let mut lookup = vec![0; group.order()];
    for (i, (_, coset)) in group.left_cosets(h).iter().enumerate() {
        for &x in coset {
            lookup[x] = i;
        }
    }
    lookup
}

/// A random covering: the base is a disjoint union of one or two coset
/// spaces G/H, and each fiber is partitioned into coset orbits G/K with
/// K ⊆ H of index at most the remaining fiber size.
pub fn random_covering<R: Rng>(group: &Arc<Group>, rng: &mut R) -> GCovering {
    let subs = group.all_subgroups();
    let orbit_count = rng.gen_range(1..=2);
    let n = rng.gen_range(1..=3);
    let mut base_parts: Vec<GSet> = Vec::new();
    let mut total_parts: Vec<GSet> = Vec::new();
    let mut proj: Vec<Vec<usize>> = Vec::new(); // per base part, base-local indices
    for _ in 0..orbit_count {
        let h = subs[rng.gen_range(0..subs.len())].clone();
        let base_index = coset_lookup(group, &h);
        base_parts.push(GSet::cosets(group.clone(), &h));
        let mut remaining = n;
        let mut local = Vec::new();
        while remaining > 0 {
            let options: Vec<&Subgroup> = subs
                .iter()
                .filter(|k| k.is_subset_of(&h) && h.len() / k.len() <= remaining)
                .collect();
            let k = options[rng.gen_range(0..options.len())];
            remaining -= h.len() / k.len();
            let reps: Vec<usize> =
                group.left_cosets(k).iter().map(|(rep, _)| *rep).collect();
            total_parts.push(GSet::cosets(group.clone(), k));
            local.push(reps.iter().map(|&r| base_index[r]).collect::<Vec<usize>>());
        }
        proj.push(local.concat());
    }
    let base = Arc::new(
        disjoint_union(group.clone(), &base_parts).expect("coset actions are valid"),
    );
    let total = Arc::new(
        disjoint_union(group.clone(), &total_parts).expect("coset actions are valid"),
    );
    let mut offsets = Vec::with_capacity(base_parts.len());
    let mut acc = 0;
    for part in &base_parts {
        offsets.push(acc);
        acc += part.size();
    }
    let mut values = Vec::new();
    for (i, local) in proj.iter().enumerate() {
        values.extend(local.iter().map(|&x| offsets[i] + x));
    }
    GCovering::new(total, base, values).expect("coset projections are coverings")
}

/// A random equivariant map into x: the source is a disjoint union of coset
/// spaces G/H with H inside the stabilizer of a chosen point of x, each
/// coset gH sent to g·(the point).
pub fn random_map_into<R: Rng>(x: &Arc<GSet>, rng: &mut R) -> GMap {
    let group = x.group().clone();
    if x.size() == 0 {
        let empty = Arc::new(
            GSet::new(group.clone(), group.elements().map(|_| Vec::new()).collect())
                .expect("the empty action is valid"),
        );
        return GMap::new(empty, x.clone(), Vec::new()).expect("empty maps are equivariant");
    }
    let subs = group.all_subgroups();
    let orbit_count = rng.gen_range(1..=2);
    let mut parts: Vec<GSet> = Vec::new();
    let mut values: Vec<usize> = Vec::new();
    for _ in 0..orbit_count {
        let point = rng.gen_range(0..x.size());
        let stab = stabilizer(x, point);
        let options: Vec<&Subgroup> =
            subs.iter().filter(|h| h.is_subset_of(&stab)).collect();
        let h = options[rng.gen_range(0..options.len())];
        let part = GSet::cosets(group.clone(), h);
        for (rep, _) in group.left_cosets(h) {
            values.push(x.act(rep, point));
        }
        parts.push(part);
    }
    let source = Arc::new(
        disjoint_union(group, &parts).expect("coset actions are valid"),
    );
    GMap::new(source, x.clone(), values).expect("translating a stabilized point is equivariant")
}

/// A levelwise n-fold covering of pointed simplicial G-sets: an equivariant
/// simplicial map sending every cell to a nondegenerate cell, with the
/// basepoint alone in its fiber and every other fiber of the same size n.
///
/// The basepoint condition mirrors the G-set picture, where the covering
/// happens on unpointed spaces and the basepoints are adjoined afterwards:
/// the plus construction of an unpointed levelwise covering always
/// satisfies it. Distinct cells of a fiber must also stay distinct along
/// faces — the combinatorial shadow of unique path lifting — which is what
/// makes the chain-level transfer commute with the differentials.
#[derive(Clone, Debug)]
pub struct SimplicialGCovering {
    map: SimplicialGMap,
    n: usize,
}

impl SimplicialGCovering {
    pub fn new(map: SimplicialGMap) -> Result<SimplicialGCovering, TransferError> {
        let total = map.source();
        let base = map.target();
        for q in 0..=total.dim() {
            for c in 0..total.cell_count(q) {
                if map.apply(q, c).is_degenerate() {
                    return Err(TransferError::NotLevelwiseCovering(format!(
                        "cell {c} in dimension {q} has a degenerate image"
                    )));
                }
            }
        }
        let bp_fiber = (0..total.cell_count(0))
            .filter(|&v| map.apply(0, v).base_cell() == base.basepoint())
            .count();
        if bp_fiber != 1 {
            return Err(TransferError::NotLevelwiseCovering(format!(
                "the basepoint fiber has {bp_fiber} vertices, expected the basepoint alone"
            )));
        }
        let mut n: Option<usize> = None;
        for q in 0..=base.dim() {
            let mut counts = vec![0usize; base.cell_count(q)];
            if q <= total.dim() {
                for c in 0..total.cell_count(q) {
                    counts[map.apply(q, c).base_cell()] += 1;
                }
            }
            for (c, &count) in counts.iter().enumerate() {
                if q == 0 && c == base.basepoint() {
                    continue;
                }
                match n {
                    None => n = Some(count),
                    Some(expected) if count != expected => {
                        return Err(TransferError::NotLevelwiseCovering(format!(
                            "fiber over cell {c} in dimension {q} has {count} cells, expected {expected}"
                        )));
                    }
                    _ => {}
                }
            }
        }
        let n = n.unwrap_or(1);
        if n == 0 {
            return Err(TransferError::NotLevelwiseCovering(
                "all fibers away from the basepoint are empty".into(),
            ));
        }
        for q in 1..=total.dim() {
            let mut seen: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
            for y in 0..total.cell_count(q) {
                let sigma = map.apply(q, y).base_cell();
                for i in 0..=q {
                    let face = total.face(q, y, i);
                    if face.is_degenerate() {
                        continue;
                    }
                    if q == 1 && face.base_cell() == total.basepoint() {
                        continue;
                    }
                    if let Some(&first) = seen.get(&(sigma, i, face.base_cell())) {
                        return Err(TransferError::NotLevelwiseCovering(format!(
                            "cells {first} and {y} in dimension {q} lie over one cell and share face {i}"
                        )));
                    }
                    seen.insert((sigma, i, face.base_cell()), y);
                }
            }
        }
        Ok(SimplicialGCovering { map, n })
    }

    pub fn map(&self) -> &SimplicialGMap {
        &self.map
    }

    pub fn total(&self) -> &Arc<SimplicialGSet> {
        self.map.source()
    }

    pub fn base(&self) -> &Arc<SimplicialGSet> {
        self.map.target()
    }

    pub fn degree(&self) -> usize {
        self.n
    }
}

/// The chain-level transfer of a levelwise covering: one matrix per degree
/// of the base complex, rows indexed by the total complex. The summand of a
/// base cell σ restricts contravariantly along each fiber orbit's isotropy
/// inclusion and lands, translated, in the summand of the orbit
/// representative — mirroring the transfer on F^G degreewise.
pub fn transfer_chain_map(
    cov: &SimplicialGCovering,
    m: &MackeyFunctor,
) -> Result<Vec<Mat>, TransferError> {
    let total = cov.total().clone();
    let base = cov.base().clone();
    let ring = m.ring();
    let orbit = m.orbit().clone();
    let group = base.group().clone();
    let base_cc = chain_complex(&base, m.covariant())?;
    let total_cc = chain_complex(&total, m.covariant())?;
    let mut out = Vec::with_capacity(base_cc.top_degree() + 1);
    for q in 0..=base_cc.top_degree() {
        let rows =
            if q <= total_cc.top_degree() { total_cc.dim_at(q) } else { 0 };
        let mut mat = Mat::zeros(rows, base_cc.dim_at(q));
        let mut col = 0;
        for &(sigma, width) in base_cc.blocks(q) {
            let g_sigma = base.isotropy(q, sigma);
            let sigma_id =
                orbit.id_of(&g_sigma).expect("isotropy subgroups are orbit objects");
            let mut seen = vec![false; total.cell_count(q)];
            for y in 0..total.cell_count(q) {
                if cov.map.apply(q, y).base_cell() != sigma || seen[y] {
                    continue;
                }
                for &h in g_sigma.elements() {
                    seen[total.act(q, h, y)] = true;
                }
                let y_id = orbit
                    .id_of(&total.isotropy(q, y))
                    .expect("isotropy subgroups are orbit objects");
                let proj = orbit
                    .canonical_projection(y_id, sigma_id)
                    .expect("fiber isotropy sits inside the base cell's isotropy");
                let rep = total.orbit_rep(q, y);
                let t = total.translation_from_rep(q, y);
                let trans = orbit
                    .right_translation(group.inv(t), y_id)
                    .expect("translations are invertible morphisms");
                let block =
                    m.matrix(&trans).mul(m.contravariant_matrix(&proj), &ring);
                let row = total_cc
                    .offset_of(q, rep)
                    .expect("orbit representatives index the total complex");
                mat.add_block(row, col, &block, &ring);
            }
            col += width;
        }
        out.push(mat);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::coeff::{builtin_mackey, constant_system, random_mackey};
    use crate::homology::induced_map;
    use crate::orbit::OrbitCategory;
    use crate::ring::Ring;
    use crate::simplicial::{builtin_space, plus, wedge, FormalSimplex};

    fn orbit_of(g: Group) -> Arc<OrbitCategory> {
        Arc::new(OrbitCategory::new(Arc::new(g)))
    }

    #[test]
    fn identity_transfer_is_the_identity() {
        let orbit = orbit_of(Group::symmetric_3());
        let group = orbit.group().clone();
        let a3 = group.subgroup_from_elements(&[0, 3, 4]).unwrap();
        let base = Arc::new(
            disjoint_union(
                group.clone(),
                &[GSet::regular(group.clone()), GSet::cosets(group.clone(), &a3)],
            )
            .unwrap(),
        );
        let m = builtin_mackey("fixed_point_regular", orbit.clone(), Ring::Integers).unwrap();
        let p = GCovering::identity(&base);
        assert_eq!(p.degree(), 1);
        let t = Transfer::new(&p, &m).unwrap();
        for v in standard_basis(t.system(), p.base_plus()) {
            assert_eq!(t.apply(&v).unwrap(), v);
        }
    }

    #[test]
    fn trivial_double_cover_sums_the_sheets() {
        let orbit = orbit_of(Group::cyclic(2));
        let group = orbit.group().clone();
        let base = Arc::new(GSet::regular(group.clone()));
        let p = GCovering::trivial(&base, 2).unwrap();
        assert_eq!(p.degree(), 2);
        let m = builtin_mackey("linearization", orbit.clone(), Ring::Integers).unwrap();
        let t = Transfer::new(&p, &m).unwrap();
        let l = vec![Ring::Integers.from_i64(1), Ring::Integers.from_i64(2)];
        let v = FGElement::generator(t.system(), p.base_plus(), &l, 0).unwrap();
        let out = t.apply(&v).unwrap();
        let reps: Vec<usize> = out.support().keys().copied().collect();
        assert_eq!(reps, vec![0, 2]);
        assert_eq!(out.coefficient(0).unwrap(), &l[..]);
        assert_eq!(out.coefficient(2).unwrap(), &l[..]);
    }

    #[test]
    fn free_cover_of_the_point_realizes_the_index() {
        let orbit = orbit_of(Group::cyclic(2));
        let group = orbit.group().clone();
        let point = Arc::new(GSet::cosets(group.clone(), &group.full_subgroup()));
        let total = Arc::new(GSet::regular(group.clone()));
        let p = GCovering::new(total, point, vec![0, 0]).unwrap();
        assert_eq!(p.degree(), 2);
        let m = builtin_mackey("fixed_point_trivial", orbit.clone(), Ring::Integers).unwrap();
        let t = Transfer::new(&p, &m).unwrap();
        let one = vec![Ring::Integers.from_i64(1)];
        let v = FGElement::generator(t.system(), p.base_plus(), &one, 0).unwrap();
        let out = t.apply(&v).unwrap();
        // the fiber is a single free orbit and restriction is the identity
        assert_eq!(out.support().len(), 1);
        assert_eq!(out.coefficient(0).unwrap(), &one[..]);
        // pushing forward along the projection multiplies by the degree
        let back = pushforward_g(&p.projection_plus(), &out);
        assert_eq!(back, v.scale(&Ring::Integers.from_i64(2)));
    }

    #[test]
    fn coset_projection_transfer_merges_fiber_orbits() {
        let orbit = orbit_of(Group::symmetric_3());
        let group = orbit.group().clone();
        let a3 = group.subgroup_from_elements(&[0, 3, 4]).unwrap();
        let base = Arc::new(GSet::cosets(group.clone(), &a3));
        let total = Arc::new(GSet::regular(group.clone()));
        let proj = coset_lookup(&group, &a3);
        let p = GCovering::new(total, base, proj).unwrap();
        assert_eq!(p.degree(), 3);
        let m = builtin_mackey("linearization", orbit.clone(), Ring::Integers).unwrap();
        assert_eq!(m.rank(orbit.id_of(&a3).unwrap()), 2);
        let t = Transfer::new(&p, &m).unwrap();
        // the whole fiber is one A3-orbit, so each transfer has one support point
        for v in standard_basis(t.system(), p.base_plus()) {
            let out = t.apply(&v).unwrap();
            assert_eq!(out.support().len(), 1);
        }
        let report = check_axioms(&[p], &[], &m).unwrap();
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn axiom_report_passes_for_homological_coefficients() {
        let orbit = orbit_of(Group::symmetric_3());
        let group = orbit.group().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let base = Arc::new(GSet::cosets(group.clone(), &group.trivial_subgroup()));
        let coverings = vec![
            GCovering::identity(&base),
            GCovering::trivial(&base, 2).unwrap(),
            random_covering(&group, &mut rng),
            random_covering(&group, &mut rng),
        ];
        let maps: Vec<GMap> =
            coverings.iter().map(|p| random_map_into(p.base(), &mut rng)).collect();
        for name in ["linearization", "fixed_point_trivial", "fixed_point_regular"] {
            let m = builtin_mackey(name, orbit.clone(), Ring::Integers).unwrap();
            let report = check_axioms(&coverings, &maps, &m).unwrap();
            assert!(report.all_passed(), "{name}:\n{report}");
        }
    }

    #[test]
    fn degree_axiom_flags_non_homological_coefficients() {
        let orbit = orbit_of(Group::cyclic(2));
        let group = orbit.group().clone();
        let point = Arc::new(GSet::cosets(group.clone(), &group.full_subgroup()));
        let total = Arc::new(GSet::regular(group.clone()));
        let p = GCovering::new(total, point, vec![0, 0]).unwrap();

        // constant coefficients restrict identically, so projecting the
        // transfer gives the identity instead of multiplication by 2
        let constant = MackeyFunctor::constant(orbit.clone(), Ring::Integers);
        let report = check_axioms(&[p.clone()], &[], &constant).unwrap();
        assert!(!report.all_passed());
        for c in report.failures() {
            assert_eq!(c.axiom, TransferAxiom::Degree);
            assert!(c.witness.is_some());
        }
        assert!(report.to_string().contains("non-homological"));

        // zero contravariant part: the transfer vanishes outright
        let covariant = constant_system(orbit.clone(), Ring::Integers);
        let subs = orbit.subgroups().to_vec();
        let contravariant: BTreeMap<_, _> = orbit
            .all_morphisms()
            .into_iter()
            .map(|f| {
                let iso = subs[f.source().index()].len() == subs[f.target().index()].len();
                (f, if iso { Mat::identity(1) } else { Mat::zeros(1, 1) })
            })
            .collect();
        let zero = MackeyFunctor::from_parts(covariant, contravariant).unwrap();
        let t = Transfer::new(&p, &zero).unwrap();
        let v = &standard_basis(t.system(), p.base_plus())[0];
        assert!(t.apply(v).unwrap().is_zero());
        let report = check_axioms(&[p], &[], &zero).unwrap();
        assert!(!report.all_passed());
    }

    #[test]
    fn composite_coverings_multiply_degrees() {
        let orbit = orbit_of(Group::cyclic(2));
        let group = orbit.group().clone();
        let base = Arc::new(GSet::cosets(group.clone(), &group.full_subgroup()));
        let p = GCovering::trivial(&base, 2).unwrap();
        let q = GCovering::trivial(p.total(), 3).unwrap();
        let pq = GCovering::compose(&p, &q).unwrap();
        assert_eq!(pq.degree(), 6);
        let m = builtin_mackey("fixed_point_regular", orbit.clone(), Ring::Integers).unwrap();
        let report = check_axioms(&[p, q, pq], &[], &m).unwrap();
        assert!(report.all_passed(), "{report}");
        assert!(report.checks.iter().any(|c| c.axiom == TransferAxiom::Functoriality));
    }

    #[test]
    fn pullback_forms_the_fiber_product() {
        let orbit = orbit_of(Group::cyclic(2));
        let group = orbit.group().clone();
        let point = Arc::new(GSet::cosets(group.clone(), &group.full_subgroup()));
        let total = Arc::new(GSet::regular(group.clone()));
        let p = GCovering::new(total, point.clone(), vec![0, 0]).unwrap();
        let regular = Arc::new(GSet::regular(group.clone()));
        let f = GMap::new(regular, point, vec![0, 0]).unwrap();
        let (pulled, tilde) = GCovering::pullback(&p, &f).unwrap();
        assert_eq!(pulled.total().size(), 4);
        assert_eq!(pulled.degree(), 2);
        assert_eq!(tilde.source().size(), 4);
        let m = builtin_mackey("linearization", orbit.clone(), Ring::Integers).unwrap();
        let report = check_axioms(&[p], &[f], &m).unwrap();
        assert!(report.all_passed(), "{report}");
        assert!(report.checks.iter().any(|c| c.axiom == TransferAxiom::Pullback));
    }

    #[test]
    fn covering_validation_rejects_bad_projections() {
        let orbit = orbit_of(Group::cyclic(2));
        let group = orbit.group().clone();
        let regular = Arc::new(GSet::regular(group.clone()));
        let two_fixed = Arc::new(
            GSet::new(group.clone(), group.elements().map(|_| vec![0, 1]).collect()).unwrap(),
        );
        match GCovering::new(regular.clone(), regular.clone(), vec![0]) {
            Err(TransferError::NotACovering(msg)) => assert!(msg.contains("values")),
            other => panic!("expected length error, got {other:?}"),
        }
        match GCovering::new(two_fixed.clone(), regular.clone(), vec![0, 0]) {
            Err(TransferError::NotACovering(msg)) => assert!(msg.contains("equivariant")),
            other => panic!("expected equivariance error, got {other:?}"),
        }
        match GCovering::new(regular.clone(), two_fixed.clone(), vec![0, 0]) {
            Err(TransferError::NotACovering(msg)) => assert!(msg.contains("fiber")),
            other => panic!("expected fiber error, got {other:?}"),
        }
        let z3 = orbit_of(Group::cyclic(3));
        let other_group = Arc::new(GSet::regular(z3.group().clone()));
        match GCovering::new(other_group, regular, vec![0, 0, 0]) {
            Err(TransferError::GroupMismatch) => {}
            other => panic!("expected group mismatch, got {other:?}"),
        }
    }

    #[test]
    fn random_coverings_and_maps_are_well_formed() {
        let orbit = orbit_of(Group::symmetric_3());
        let group = orbit.group().clone();
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_covering(&group, &mut rng);
            assert!((1..=3).contains(&p.degree()));
            GCovering::new(p.total().clone(), p.base().clone(), p.projection().to_vec())
                .unwrap();
            let f = random_map_into(p.base(), &mut rng);
            let (pulled, _) = GCovering::pullback(&p, &f).unwrap();
            assert_eq!(pulled.degree(), p.degree());

            let text = serde_json::to_string(&p.to_spec()).unwrap();
            let spec: CoveringSpec = serde_json::from_str(&text).unwrap();
            let back = GCovering::from_spec(group.clone(), &spec).unwrap();
            assert_eq!(back.projection(), p.projection());
            assert_eq!(back.degree(), p.degree());
        }
    }

    /// The plus form of the trivial double cover X ⊔ X → X: the wedge of
    /// two copies of X⁺ folding onto X⁺, so the adjoined basepoint is alone
    /// in its fiber and every other cell has the two sheet copies over it.
    fn fold_double_cover(x: &SimplicialGSet) -> SimplicialGCovering {
        let base = Arc::new(plus(x));
        let (w, _, _) = wedge(&base, &base).unwrap();
        let mut values = Vec::new();
        for q in 0..=w.dim() {
            let sheet = base.cell_count(q);
            let row: Vec<FormalSimplex> = (0..w.cell_count(q))
                .map(|c| {
                    let image = if c < sheet { c } else { c - sheet };
                    FormalSimplex::nondegenerate(q, image)
                })
                .collect();
            values.push(row);
        }
        let fold = SimplicialGMap::new(w, base.clone(), values).unwrap();
        SimplicialGCovering::new(fold).unwrap()
    }

    #[test]
    fn identity_simplicial_covering_has_identity_transfer() {
        let orbit = orbit_of(Group::cyclic(2));
        let group = orbit.group().clone();
        let x = Arc::new(builtin_space("circle_antipodal", &group).unwrap());
        let cov = SimplicialGCovering::new(SimplicialGMap::identity(&x)).unwrap();
        assert_eq!(cov.degree(), 1);
        let m = builtin_mackey("linearization", orbit.clone(), Ring::Integers).unwrap();
        for mat in transfer_chain_map(&cov, &m).unwrap() {
            assert!(mat.is_identity());
        }
    }

    #[test]
    fn fold_cover_chain_transfer_commutes_and_doubles() {
        let orbit = orbit_of(Group::cyclic(2));
        let group = orbit.group().clone();
        let x = builtin_space("circle_antipodal", &group).unwrap();
        let cov = fold_double_cover(&x);
        assert_eq!(cov.degree(), 2);
        for name in ["constant", "linearization", "fixed_point_regular"] {
            let m = builtin_mackey(name, orbit.clone(), Ring::Integers).unwrap();
            let ring = m.ring();
            let t = transfer_chain_map(&cov, &m).unwrap();
            let total_cc = chain_complex(cov.total(), m.covariant()).unwrap();
            let base_cc = chain_complex(cov.base(), m.covariant()).unwrap();
            for q in 1..=base_cc.top_degree() {
                let lhs = total_cc.diff(q).mul(&t[q], &ring);
                let rhs = t[q - 1].mul(base_cc.diff(q), &ring);
                assert_eq!(lhs, rhs, "{name}: differentials at degree {q}");
            }
            // folding back collapses the transfer to multiplication by 2
            let fold = induced_map(cov.map(), m.covariant()).unwrap();
            for q in 0..=base_cc.top_degree() {
                let product = fold[q].mul(&t[q], &ring);
                let doubled = Mat::identity(base_cc.dim_at(q))
                    .scale(&ring.from_i64(2), &ring);
                assert_eq!(product, doubled, "{name}: degree {q}");
            }
        }
    }

    #[test]
    fn simplicial_covering_rejects_degenerate_and_uneven_maps() {
        let orbit = orbit_of(Group::cyclic(2));
        let group = orbit.group().clone();
        let x = Arc::new(builtin_space("circle_antipodal", &group).unwrap());
        let pt = Arc::new(builtin_space("s0_trivial", &group).unwrap());
        match SimplicialGCovering::new(SimplicialGMap::collapse(&x, &pt)) {
            Err(TransferError::NotLevelwiseCovering(msg)) => {
                assert!(msg.contains("degenerate"));
            }
            other => panic!("expected degeneracy rejection, got {other:?}"),
        }
        let xp = Arc::new(plus(&x));
        let (w, inclusion, _) = wedge(&x, &xp).unwrap();
        match SimplicialGCovering::new(inclusion) {
            Err(TransferError::NotLevelwiseCovering(msg)) => assert!(msg.contains("fiber")),
            other => panic!("expected fiber rejection, got {other:?}"),
        }
        // folding X onto one of the two sides leaves a stray vertex over the
        // basepoint, which is not a pointed covering
        let mut values = Vec::new();
        for q in 0..=w.dim() {
            let sheet = x.cell_count(q);
            let row: Vec<FormalSimplex> = (0..w.cell_count(q))
                .map(|c| {
                    let image = if c < sheet { c } else { c - sheet };
                    FormalSimplex::nondegenerate(q, image)
                })
                .collect();
            values.push(row);
        }
        let one_sided = SimplicialGMap::new(w, x.clone(), values).unwrap();
        match SimplicialGCovering::new(one_sided) {
            Err(TransferError::NotLevelwiseCovering(msg)) => {
                assert!(msg.contains("basepoint"));
            }
            other => panic!("expected basepoint rejection, got {other:?}"),
        }
    }

    #[test]
    fn fold_cover_of_rotation_circle_doubles_in_homology() {
        let orbit = orbit_of(Group::cyclic(3));
        let group = orbit.group().clone();
        let x = builtin_space("circle_rotation", &group).unwrap();
        let cov = fold_double_cover(&x);
        let m = builtin_mackey("constant", orbit.clone(), Ring::Integers).unwrap();
        let ring = m.ring();
        // the base is X⁺, so its reduced homology is the unreduced homology
        // of the rotation circle
        let base_h = crate::homology::reduced_homology(cov.base(), m.covariant()).unwrap();
        assert_eq!(base_h.group(0).betti, 1);
        assert_eq!(base_h.group(1).betti, 1);
        // folding after transferring doubles every chain group, hence acts
        // as multiplication by 2 on all of homology, H_1 included
        let t = transfer_chain_map(&cov, &m).unwrap();
        let fold = induced_map(cov.map(), m.covariant()).unwrap();
        let base_cc = chain_complex(cov.base(), m.covariant()).unwrap();
        for q in 0..=base_cc.top_degree() {
            let product = fold[q].mul(&t[q], &ring);
            let doubled =
                Mat::identity(base_cc.dim_at(q)).scale(&ring.from_i64(2), &ring);
            assert_eq!(product, doubled);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn transfer_is_additive(seed in 0u64..500) {
            let orbit = orbit_of(Group::symmetric_3());
            let group = orbit.group().clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_covering(&group, &mut rng);
            let m = random_mackey(orbit.clone(), Ring::Integers, &mut rng);
            let t = Transfer::new(&p, &m).unwrap();
            let sys = t.system().clone();
            let u = FGElement::random(&sys, p.base_plus(), &mut rng);
            let v = FGElement::random(&sys, p.base_plus(), &mut rng);
            let sum = t.apply(&u.add(&v).unwrap()).unwrap();
            let parts = t.apply(&u).unwrap().add(&t.apply(&v).unwrap()).unwrap();
            prop_assert_eq!(sum, parts);
        }
    }
}
