//! The modules F(S,M) and F^G(S,M) attached to a pointed G-set S and a
//! covariant coefficient system M, together with the maps that relate them:
//! the G-action, pushforwards along pointed G-maps, the orbit-sum section ι,
//! the normalization β, and α = β∘ι.
//!
//! F(S,M) is the module of finitely supported functions u with
//! u(x) ∈ M(G/G_x) and u(basepoint) = 0. F^G(S,M) is represented directly
//! in the γ-basis: one coordinate vector per non-basepoint orbit, stored at
//! the orbit's canonical (minimal) representative.

use crate::coeff::CoefficientSystem;
use crate::gset::{PointedGMap, PointedGSet};
use crate::orbit::{OrbitMorphism, SubgroupId};
use crate::ring::{Ring, Scalar};
use num_traits::Zero;
use rand::Rng;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FError {
    #[error("generators cannot sit at the basepoint")]
    BasepointGenerator,
    #[error("vector has length {got}, expected rank {expected} at this isotropy")]
    RankMismatch { expected: usize, got: usize },
    #[error("coefficient system and G-set live over different groups")]
    GroupMismatch,
    #[error("operands belong to different spaces or systems")]
    SpaceMismatch,
    #[error("index {index} is not invertible over {ring}")]
    NotInvertible { index: usize, ring: Ring },
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// An element of F(S,M): a finitely supported function on S minus the
/// basepoint, with u(x) ∈ M(G/G_x). Zero vectors are pruned, so equality of
/// supports is equality of elements.
#[derive(Clone)]
pub struct FElement {
    system: Arc<CoefficientSystem>,
    space: Arc<PointedGSet>,
    support: BTreeMap<usize, Vec<Scalar>>,
}

/// An element of F^G(S,M) in the γ-basis: one coordinate vector per orbit,
/// keyed by the orbit's minimal representative.
#[derive(Clone)]
pub struct FGElement {
    system: Arc<CoefficientSystem>,
    space: Arc<PointedGSet>,
    support: BTreeMap<usize, Vec<Scalar>>,
}

impl PartialEq for FElement {
    fn eq(&self, other: &Self) -> bool {
        self.support == other.support
    }
}
impl Eq for FElement {}

impl PartialEq for FGElement {
    fn eq(&self, other: &Self) -> bool {
        self.support == other.support
    }
}
impl Eq for FGElement {}

impl std::fmt::Debug for FElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FElement({:?})", self.support)
    }
}

impl std::fmt::Debug for FGElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FGElement({:?})", self.support)
    }
}

fn check_context(system: &Arc<CoefficientSystem>, space: &Arc<PointedGSet>) -> Result<(), FError> {
    if system.group() != space.group() {
        return Err(FError::GroupMismatch);
    }
    Ok(())
}

fn isotropy_id(system: &CoefficientSystem, space: &PointedGSet, x: usize) -> SubgroupId {
    system
        .orbit()
        .id_of(&space.isotropy(x))
        .expect("isotropy subgroups are in the lattice")
}

/// The translation morphism G/G_x → G/G_{gx} used by the action formula:
/// right multiplication by g⁻¹ on cosets.
fn translation(system: &CoefficientSystem, space: &PointedGSet, g: usize, x: usize) -> OrbitMorphism {
    system
        .orbit()
        .right_translation(g, isotropy_id(system, space, x))
        .expect("subgroup id in range")
}

fn add_into(
    support: &mut BTreeMap<usize, Vec<Scalar>>,
    key: usize,
    vec: Vec<Scalar>,
    ring: &Ring,
) {
    if is_zero_vec(&vec) {
        return;
    }
    match support.get_mut(&key) {
        None => {
            support.insert(key, vec);
        }
        Some(cur) => {
            for (c, v) in cur.iter_mut().zip(vec) {
                *c = ring.add(c, &v);
            }
            if is_zero_vec(cur) {
                support.remove(&key);
            }
        }
    }
}

impl FElement {
    pub fn zero(system: Arc<CoefficientSystem>, space: Arc<PointedGSet>) -> FElement {
        FElement { system, space, support: BTreeMap::new() }
    }

    pub fn system(&self) -> &Arc<CoefficientSystem> {
        &self.system
    }

    pub fn space(&self) -> &Arc<PointedGSet> {
        &self.space
    }

    pub fn support(&self) -> &BTreeMap<usize, Vec<Scalar>> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn coefficient(&self, x: usize) -> Option<&[Scalar]> {
        self.support.get(&x).map(Vec::as_slice)
    }

    pub fn add(&self, other: &FElement) -> Result<FElement, FError> {
        if self.space != other.space {
            return Err(FError::SpaceMismatch);
        }
        let ring = self.system.ring();
        let mut out = self.clone();
        for (&x, v) in &other.support {
            add_into(&mut out.support, x, v.clone(), &ring);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> FElement {
        let ring = self.system.ring();
        let mut out = FElement::zero(self.system.clone(), self.space.clone());
        for (&x, v) in &self.support {
            add_into(&mut out.support, x, v.iter().map(|c| ring.mul(c, s)).collect(), &ring);
        }
        out
    }

    pub fn neg(&self) -> FElement {
        self.scale(&self.system.ring().from_i64(-1))
    }
}

impl FGElement {
    pub fn zero(system: Arc<CoefficientSystem>, space: Arc<PointedGSet>) -> FGElement {
        FGElement { system, space, support: BTreeMap::new() }
    }

    pub fn system(&self) -> &Arc<CoefficientSystem> {
        &self.system
    }

    pub fn space(&self) -> &Arc<PointedGSet> {
        &self.space
    }

    pub fn support(&self) -> &BTreeMap<usize, Vec<Scalar>> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn coefficient(&self, rep: usize) -> Option<&[Scalar]> {
        self.support.get(&rep).map(Vec::as_slice)
    }

    pub fn add(&self, other: &FGElement) -> Result<FGElement, FError> {
        if self.space != other.space {
            return Err(FError::SpaceMismatch);
        }
        let ring = self.system.ring();
        let mut out = self.clone();
        for (&x, v) in &other.support {
            add_into(&mut out.support, x, v.clone(), &ring);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> FGElement {
        let ring = self.system.ring();
        let mut out = FGElement::zero(self.system.clone(), self.space.clone());
        for (&x, v) in &self.support {
            add_into(&mut out.support, x, v.iter().map(|c| ring.mul(c, s)).collect(), &ring);
        }
        out
    }

    pub fn neg(&self) -> FGElement {
        self.scale(&self.system.ring().from_i64(-1))
    }

    /// The generator γ^G_x(l), normalized to the canonical representative of
    /// the orbit of x via γ^G_x = γ^G_r ∘ M_*(R) for the translation R
    /// carrying x's coordinates to the representative.
    pub fn generator(
        system: &Arc<CoefficientSystem>,
        space: &Arc<PointedGSet>,
        l: &[Scalar],
        x: usize,
    ) -> Result<FGElement, FError> {
        check_context(system, space)?;
        if x == space.basepoint() {
            return Err(FError::BasepointGenerator);
        }
        let expected = system.rank(isotropy_id(system, space, x));
        if l.len() != expected {
            return Err(FError::RankMismatch { expected, got: l.len() });
        }
        let ring = system.ring();
        let r = space.orbit_rep(x);
        let t = space.translation_from_rep(x);
        let group = space.group();
        let m = system.matrix(&translation(system, space, group.inv(t), x));
        let mut support = BTreeMap::new();
        add_into(&mut support, r, m.apply(l, &ring), &ring);
        Ok(FGElement { system: system.clone(), space: space.clone(), support })
    }

    /// A random element with a few random small coordinates.
    pub fn random<R: Rng>(
        system: &Arc<CoefficientSystem>,
        space: &Arc<PointedGSet>,
        rng: &mut R,
    ) -> FGElement {
        let ring = system.ring();
        let mut out = FGElement::zero(system.clone(), space.clone());
        for (rep, _) in space.orbits() {
            if rep == space.basepoint() || rng.gen_bool(0.3) {
                continue;
            }
            let rank = system.rank(isotropy_id(system, space, rep));
            let l: Vec<Scalar> =
                (0..rank).map(|_| ring.from_i64(rng.gen_range(-3..=3))).collect();
            add_into(&mut out.support, rep, l, &ring);
        }
        out
    }
}

/// The generator lx of F(S,M): supported at the single point x.
pub fn generator(
    system: &Arc<CoefficientSystem>,
    space: &Arc<PointedGSet>,
    l: &[Scalar],
    x: usize,
) -> Result<FElement, FError> {
    check_context(system, space)?;
    if x == space.basepoint() {
        return Err(FError::BasepointGenerator);
    }
    let expected = system.rank(isotropy_id(system, space, x));
    if l.len() != expected {
        return Err(FError::RankMismatch { expected, got: l.len() });
    }
    let ring = system.ring();
    let mut support = BTreeMap::new();
    add_into(&mut support, x, l.iter().map(|c| ring.normalize(c.clone())).collect(), &ring);
    Ok(FElement { system: system.clone(), space: space.clone(), support })
}

/// The G-action: g·(lx) = M_*(R_{g⁻¹})(l) placed at gx, extended linearly.
pub fn g_act(g: usize, u: &FElement) -> FElement {
    let ring = u.system.ring();
    let mut out = FElement::zero(u.system.clone(), u.space.clone());
    for (&x, l) in &u.support {
        let m = u.system.matrix(&translation(&u.system, &u.space, g, x));
        add_into(&mut out.support, u.space.act(g, x), m.apply(l, &ring), &ring);
    }
    out
}

/// The pushforward f_*: F(S,M) → F(T,M), f_*(lx) = M_*(f̂_x)(l) at f(x);
/// points landing on the basepoint are dropped.
pub fn pushforward(f: &PointedGMap, u: &FElement) -> FElement {
    assert!(u.space == *f.source(), "element does not live on the map's source");
    let ring = u.system.ring();
    let mut out = FElement {
        system: u.system.clone(),
        space: f.target().clone(),
        support: BTreeMap::new(),
    };
    for (&x, l) in &u.support {
        let y = f.apply(x);
        if y == f.target().basepoint() {
            continue;
        }
        let src = isotropy_id(&u.system, &u.space, x);
        let tgt = isotropy_id(&u.system, f.target(), y);
        let proj = u
            .system
            .orbit()
            .canonical_projection(src, tgt)
            .expect("equivariance makes G_x ≤ G_f(x)");
        add_into(&mut out.support, y, u.system.matrix(&proj).apply(l, &ring), &ring);
    }
    out
}

/// The normalization β: F(S,M) → F^G(S,M), lx ↦ γ^G_x(l), with every orbit
/// coordinate renormalized to the orbit's canonical representative.
pub fn beta(u: &FElement) -> FGElement {
    let ring = u.system.ring();
    let group = u.space.group().clone();
    let mut out = FGElement::zero(u.system.clone(), u.space.clone());
    for (&x, l) in &u.support {
        let r = u.space.orbit_rep(x);
        let t = u.space.translation_from_rep(x);
        let m = u.system.matrix(&translation(&u.system, &u.space, group.inv(t), x));
        add_into(&mut out.support, r, m.apply(l, &ring), &ring);
    }
    out
}

/// The section ι: F^G(S,M) → F(S,M), expanding γ^G_r(l) into the orbit sum
/// Σ_{[g] ∈ G/G_r} M_*(R_{g⁻¹})(l) placed at g·r. Its image is exactly the
/// G-fixed part of F(S,M).
pub fn iota(v: &FGElement) -> FElement {
    let ring = v.system.ring();
    let group = v.space.group().clone();
    let mut out = FElement::zero(v.system.clone(), v.space.clone());
    for (&r, l) in &v.support {
        for (g, _) in group.left_cosets(&v.space.isotropy(r)) {
            let m = v.system.matrix(&translation(&v.system, &v.space, g, r));
            add_into(&mut out.support, v.space.act(g, r), m.apply(l, &ring), &ring);
        }
    }
    out
}

/// The induced map f^G_*: F^G(S,M) → F^G(T,M),
/// γ^G_x(l) ↦ γ^G_{f(x)}(M_*(f̂_x)(l)), renormalized to target
/// representatives.
pub fn pushforward_g(f: &PointedGMap, v: &FGElement) -> FGElement {
    assert!(v.space == *f.source(), "element does not live on the map's source");
    let ring = v.system.ring();
    let group = v.space.group().clone();
    let target = f.target().clone();
    let mut out = FGElement {
        system: v.system.clone(),
        space: target.clone(),
        support: BTreeMap::new(),
    };
    for (&r, l) in &v.support {
        let y = f.apply(r);
        if y == target.basepoint() {
            continue;
        }
        let src = isotropy_id(&v.system, &v.space, r);
        let mid = isotropy_id(&v.system, &target, y);
        let proj = v
            .system
            .orbit()
            .canonical_projection(src, mid)
            .expect("equivariance makes G_x ≤ G_f(x)");
        let pushed = v.system.matrix(&proj).apply(l, &ring);
        // renormalize y to its orbit representative in the target
        let rep = target.orbit_rep(y);
        let t = target.translation_from_rep(y);
        let m = v.system.matrix(&translation(&v.system, &target, group.inv(t), y));
        add_into(&mut out.support, rep, m.apply(&pushed, &ring), &ring);
    }
    out
}

/// α = β∘ι; on the γ-basis it scales the coordinate at each representative r
/// by the orbit length [G : G_r].
pub fn alpha(v: &FGElement) -> FGElement {
    let ring = v.system.ring();
    let group = v.space.group().clone();
    let mut out = FGElement::zero(v.system.clone(), v.space.clone());
    for (&r, l) in &v.support {
        let index = group.index_of(&v.space.isotropy(r));
        let s = ring.from_i64(index as i64);
        add_into(&mut out.support, r, l.iter().map(|c| ring.mul(c, &s)).collect(), &ring);
    }
    out
}

/// Inverse of α where it exists: divides each coordinate by [G : G_r].
/// Fails over Z (or over F_p when p divides the orbit length).
pub fn alpha_inv(v: &FGElement) -> Result<FGElement, FError> {
    let ring = v.system.ring();
    let group = v.space.group().clone();
    let mut out = FGElement::zero(v.system.clone(), v.space.clone());
    for (&r, l) in &v.support {
        let index = group.index_of(&v.space.isotropy(r));
        let inv = ring
            .inv(&ring.from_i64(index as i64))
            .ok_or(FError::NotInvertible { index, ring })?;
        add_into(&mut out.support, r, l.iter().map(|c| ring.mul(c, &inv)).collect(), &ring);
    }
    Ok(out)
}
