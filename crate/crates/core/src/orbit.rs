//! The orbit category of a finite group: objects are the coset spaces G/H,
//! morphisms G/H → G/K are right multiplications xH ↦ xaK that are
//! well-defined, i.e. a⁻¹Ha ⊆ K.
//!
//! Each morphism is stored with the canonical (minimal-index) representative
//! of its coset aK, so equality of morphisms is plain structural equality.

use crate::group::{Group, Subgroup};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

/// Index of a subgroup in the canonical (size, elements)-sorted listing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubgroupId(pub usize);

impl SubgroupId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for SubgroupId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrbitError {
    #[error("subgroup id {0} out of range")]
    UnknownSubgroup(SubgroupId),
    #[error("element set is not one of the listed subgroups")]
    NotASubgroup,
    #[error("{h} is not a subgroup of {k}")]
    NotASubgroupPair { h: SubgroupId, k: SubgroupId },
    #[error("representative {rep} does not define a morphism G/{from} → G/{to}")]
    InvalidRepresentation { from: SubgroupId, to: SubgroupId, rep: usize },
    #[error("morphisms are not composable: target G/{inner_target} ≠ source G/{outer_source}")]
    NonComposable { inner_target: SubgroupId, outer_source: SubgroupId },
}

/// A morphism G/source → G/target, sending xH ↦ x·rep·K. `rep` is always the
/// minimal element of its coset rep·K.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitMorphism {
    source: SubgroupId,
    target: SubgroupId,
    rep: usize,
}

impl OrbitMorphism {
    pub fn source(&self) -> SubgroupId {
        self.source
    }

    pub fn target(&self) -> SubgroupId {
        self.target
    }

    pub fn rep(&self) -> usize {
        self.rep
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.rep == 0
    }
}

impl std::fmt::Display for OrbitMorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "G/H{} → G/H{} via rep {}",
            self.source.index(),
            self.target.index(),
            self.rep
        )
    }
}

/// JSON form of a morphism: `{"src": h, "tgt": k, "rep": g}`.
#[derive(Serialize, Deserialize, Clone, Copy, Debug)]
pub struct MorphismSpec {
    pub src: usize,
    pub tgt: usize,
    pub rep: usize,
}

/// The full orbit category, with the subgroup lattice precomputed.
pub struct OrbitCategory {
    group: Arc<Group>,
    subgroups: Vec<Subgroup>,
    by_elements: BTreeMap<Vec<usize>, SubgroupId>,
}

impl std::fmt::Debug for OrbitCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OrbitCategory({} subgroups of {:?})", self.subgroups.len(), self.group)
    }
}

impl OrbitCategory {
    pub fn new(group: Arc<Group>) -> OrbitCategory {
        let subgroups = group.all_subgroups();
        let by_elements = subgroups
            .iter()
            .enumerate()
            .map(|(i, h)| (h.elements().to_vec(), SubgroupId(i)))
            .collect();
        OrbitCategory { group, subgroups, by_elements }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn subgroup_count(&self) -> usize {
        self.subgroups.len()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, id: SubgroupId) -> Result<&Subgroup, OrbitError> {
        self.subgroups.get(id.0).ok_or(OrbitError::UnknownSubgroup(id))
    }

    /// Looks a subgroup up by its element set.
    pub fn id_of(&self, h: &Subgroup) -> Result<SubgroupId, OrbitError> {
        self.by_elements
            .get(h.elements())
            .copied()
            .ok_or(OrbitError::NotASubgroup)
    }

    /// Id of the isotropy subgroup generated by an element set. The set must
    /// be closed; otherwise this is an error.
    pub fn id_of_elements(&self, elements: &[usize]) -> Result<SubgroupId, OrbitError> {
        let h = self
            .group
            .subgroup_from_elements(elements)
            .map_err(|_| OrbitError::NotASubgroup)?;
        self.id_of(&h)
    }

    pub fn trivial_id(&self) -> SubgroupId {
        SubgroupId(0)
    }

    pub fn full_id(&self) -> SubgroupId {
        SubgroupId(self.subgroups.len() - 1)
    }

    fn minimal_coset_rep(&self, a: usize, k: &Subgroup) -> usize {
        k.elements()
            .iter()
            .map(|&x| self.group.mul(a, x))
            .min()
            .expect("subgroup nonempty")
    }

    fn rep_is_valid(&self, h: &Subgroup, k: &Subgroup, a: usize) -> bool {
        let ai = self.group.inv(a);
        h.elements()
            .iter()
            .all(|&x| k.contains(self.group.mul(self.group.mul(ai, x), a)))
    }

    /// Builds and canonicalizes the morphism G/source → G/target with the
    /// given representative, rejecting representatives that do not give a
    /// well-defined map.
    pub fn morphism(
        &self,
        source: SubgroupId,
        target: SubgroupId,
        rep: usize,
    ) -> Result<OrbitMorphism, OrbitError> {
        let h = self.subgroup(source)?;
        let k = self.subgroup(target)?;
        if rep >= self.group.order() {
            return Err(OrbitError::InvalidRepresentation { from: source, to: target, rep });
        }
        if !self.rep_is_valid(h, k, rep) {
            return Err(OrbitError::InvalidRepresentation { from: source, to: target, rep });
        }
        Ok(OrbitMorphism { source, target, rep: self.minimal_coset_rep(rep, k) })
    }

    pub fn from_spec(&self, spec: &MorphismSpec) -> Result<OrbitMorphism, OrbitError> {
        self.morphism(SubgroupId(spec.src), SubgroupId(spec.tgt), spec.rep)
    }

    pub fn identity(&self, at: SubgroupId) -> Result<OrbitMorphism, OrbitError> {
        self.subgroup(at)?;
        Ok(OrbitMorphism { source: at, target: at, rep: 0 })
    }

    /// All morphisms G/source → G/target: one per coset aK with a⁻¹Ha ⊆ K.
    pub fn hom_set(
        &self,
        source: SubgroupId,
        target: SubgroupId,
    ) -> Result<Vec<OrbitMorphism>, OrbitError> {
        let h = self.subgroup(source)?;
        let k = self.subgroup(target)?;
        Ok(self
            .group
            .left_cosets(k)
            .into_iter()
            .filter(|(rep, _)| self.rep_is_valid(h, k, *rep))
            .map(|(rep, _)| OrbitMorphism { source, target, rep })
            .collect())
    }

    /// Every morphism of the category, grouped in source-major order.
    pub fn all_morphisms(&self) -> Vec<OrbitMorphism> {
        let mut out = Vec::new();
        for s in 0..self.subgroups.len() {
            for t in 0..self.subgroups.len() {
                out.extend(self.hom_set(SubgroupId(s), SubgroupId(t)).expect("ids in range"));
            }
        }
        out
    }

    /// Composition `outer ∘ inner` (apply `inner` first). The coset
    /// representative of the composite is rep(inner)·rep(outer).
    pub fn compose(
        &self,
        outer: &OrbitMorphism,
        inner: &OrbitMorphism,
    ) -> Result<OrbitMorphism, OrbitError> {
        if inner.target != outer.source {
            return Err(OrbitError::NonComposable {
                inner_target: inner.target,
                outer_source: outer.source,
            });
        }
        let k = self.subgroup(outer.target)?;
        let rep = self.group.mul(inner.rep, outer.rep);
        Ok(OrbitMorphism {
            source: inner.source,
            target: outer.target,
            rep: self.minimal_coset_rep(rep, k),
        })
    }

    /// The isomorphism G/H → G/(gHg⁻¹) given by xH ↦ xg⁻¹(gHg⁻¹).
    pub fn right_translation(&self, g: usize, h: SubgroupId) -> Result<OrbitMorphism, OrbitError> {
        let sub = self.subgroup(h)?;
        let conj = self.group.conjugate(sub, g);
        let target = self.id_of(&conj).expect("conjugate of a subgroup is a subgroup");
        let k = self.subgroup(target)?;
        Ok(OrbitMorphism {
            source: h,
            target,
            rep: self.minimal_coset_rep(self.group.inv(g), k),
        })
    }

    /// The projection G/H → G/K collapsing along an inclusion H ⊆ K.
    pub fn canonical_projection(
        &self,
        h: SubgroupId,
        k: SubgroupId,
    ) -> Result<OrbitMorphism, OrbitError> {
        let hs = self.subgroup(h)?;
        let ks = self.subgroup(k)?;
        if !hs.is_subset_of(ks) {
            return Err(OrbitError::NotASubgroupPair { h, k });
        }
        Ok(OrbitMorphism { source: h, target: k, rep: 0 })
    }

    /// Splits any morphism φ: G/H → G/K with representative a into
    /// a right translation after a canonical projection:
    /// φ = right_translation(a⁻¹, aKa⁻¹-id) ∘ canonical_projection(H ⊆ aKa⁻¹).
    pub fn factorize(
        &self,
        f: &OrbitMorphism,
    ) -> Result<(OrbitMorphism, OrbitMorphism), OrbitError> {
        let k = self.subgroup(f.target)?;
        let conj = self.group.conjugate(k, f.rep);
        let mid = self.id_of(&conj).expect("conjugate of a subgroup is a subgroup");
        let projection = self.canonical_projection(f.source, mid)?;
        let translation = self.right_translation(self.group.inv(f.rep), mid)?;
        debug_assert_eq!(translation.target, f.target);
        Ok((projection, translation))
    }

    /// A canonical chain of one-step projections H = H₀ ⊊ H₁ ⊊ … ⊊ Hₘ = K
    /// with no intermediate subgroup inside any step; each step picks the
    /// smallest eligible subgroup in (size, elements) order. Returns the
    /// consecutive morphisms, inner first.
    pub fn projection_chain(
        &self,
        h: SubgroupId,
        k: SubgroupId,
    ) -> Result<Vec<OrbitMorphism>, OrbitError> {
        let ks = self.subgroup(k)?;
        if !self.subgroup(h)?.is_subset_of(ks) {
            return Err(OrbitError::NotASubgroupPair { h, k });
        }
        let mut chain = Vec::new();
        let mut cur = h;
        while cur != k {
            let cur_sub = self.subgroup(cur)?;
            let next = (0..self.subgroups.len())
                .map(SubgroupId)
                .find(|&cand| {
                    let cs = &self.subgroups[cand.0];
                    cs.len() > cur_sub.len() && cur_sub.is_subset_of(cs) && cs.is_subset_of(ks)
                })
                .expect("K itself is always eligible");
            chain.push(OrbitMorphism { source: cur, target: next, rep: 0 });
            cur = next;
        }
        Ok(chain)
    }
}
