//! Finite G-sets (pointed and unpointed), their isotropy subgroups, orbits,
//! fixed-point subsets, and pointed equivariant maps.
//!
//! Actions are dense index tables validated at construction, so invalid
//! actions and non-equivariant maps are unrepresentable afterwards.

use crate::group::{Group, Subgroup};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GSetError {
    #[error("action entry for (g={g}, x={x}) is {value}, out of range for size {size}")]
    OutOfRange { g: usize, x: usize, value: usize, size: usize },
    #[error("action table has {rows} rows, expected one per group element ({order})")]
    WrongShape { rows: usize, order: usize },
    #[error("identity row does not fix {x}")]
    IdentityMoves { x: usize },
    #[error("action is not associative at (g={g}, h={h}, x={x})")]
    NotAnAction { g: usize, h: usize, x: usize },
    #[error("basepoint {basepoint} is moved by group element {g}")]
    BasepointMoved { basepoint: usize, g: usize },
    #[error("basepoint index {basepoint} out of range for size {size}")]
    BadBasepoint { basepoint: usize, size: usize },
    #[error("map is not equivariant at (g={g}, x={x})")]
    NotEquivariant { g: usize, x: usize },
    #[error("map does not preserve the basepoint")]
    BasepointNotPreserved,
    #[error("map has {len} values, expected {size}")]
    WrongLength { len: usize, size: usize },
    #[error("value {value} out of range for target of size {size}")]
    ValueOutOfRange { value: usize, size: usize },
    #[error("operands live over different groups")]
    GroupMismatch,
}

/// An unpointed finite G-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    group: Arc<Group>,
    size: usize,
    action: Vec<usize>,
}

/// A finite G-set with a G-fixed basepoint.
#[derive(Clone, PartialEq, Eq)]
pub struct PointedGSet {
    group: Arc<Group>,
    size: usize,
    basepoint: usize,
    action: Vec<usize>,
}

fn validate_action(group: &Group, size: usize, action: &[Vec<usize>]) -> Result<Vec<usize>, GSetError> {
    let order = group.order();
    if action.len() != order {
        return Err(GSetError::WrongShape { rows: action.len(), order });
    }
    for (g, row) in action.iter().enumerate() {
        if row.len() != size {
            return Err(GSetError::WrongShape { rows: action.len(), order });
        }
        for (x, &value) in row.iter().enumerate() {
            if value >= size {
                return Err(GSetError::OutOfRange { g, x, value, size });
            }
        }
    }
    for x in 0..size {
        if action[0][x] != x {
            return Err(GSetError::IdentityMoves { x });
        }
    }
    for g in 0..order {
        for h in 0..order {
            let gh = group.mul(g, h);
            for x in 0..size {
                if action[g][action[h][x]] != action[gh][x] {
                    return Err(GSetError::NotAnAction { g, h, x });
                }
            }
        }
    }
    Ok(action.iter().flatten().copied().collect())
}

impl GSet {
    pub fn new(group: Arc<Group>, action: Vec<Vec<usize>>) -> Result<GSet, GSetError> {
        let size = action.first().map_or(0, Vec::len);
        let flat = validate_action(&group, size, &action)?;
        Ok(GSet { group, size, action: flat })
    }

    /// G acting on itself by left multiplication.
    pub fn regular(group: Arc<Group>) -> GSet {
        let order = group.order();
        let action = (0..order)
            .flat_map(|g| (0..order).map(move |x| (g, x)))
            .map(|(g, x)| group.mul(g, x))
            .collect();
        GSet { group, size: order, action }
    }

    /// The coset space G/H with left translation action.
    pub fn cosets(group: Arc<Group>, h: &Subgroup) -> GSet {
        let cosets = group.left_cosets(h);
        let size = cosets.len();
        let mut coset_index = vec![usize::MAX; group.order()];
        for (i, (_, coset)) in cosets.iter().enumerate() {
            for &x in coset {
                coset_index[x] = i;
            }
        }
        let action = (0..group.order())
            .flat_map(|g| {
                let group = &group;
                let cosets = &cosets;
                let coset_index = &coset_index;
                (0..size).map(move |i| coset_index[group.mul(g, cosets[i].0)])
            })
            .collect();
        GSet { group, size, action }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.size + x]
    }
}

/// Adjoins a disjoint G-fixed basepoint (as the last index).
pub fn add_basepoint(s: &GSet) -> PointedGSet {
    let size = s.size + 1;
    let order = s.group.order();
    let mut action = Vec::with_capacity(order * size);
    for g in 0..order {
        for x in 0..s.size {
            action.push(s.act(g, x));
        }
        action.push(s.size);
    }
    PointedGSet { group: s.group.clone(), size, basepoint: s.size, action }
}

/// JSON form: `{"size": n, "basepoint": i, "action": [[...]]}`.
#[derive(Serialize, Deserialize)]
pub struct PointedGSetSpec {
    pub size: usize,
    pub basepoint: usize,
    pub action: Vec<Vec<usize>>,
}

/// JSON form of a map: `{"values": [...]}`.
#[derive(Serialize, Deserialize)]
pub struct GMapSpec {
    pub values: Vec<usize>,
}

impl PointedGSet {
    pub fn new(
        group: Arc<Group>,
        basepoint: usize,
        action: Vec<Vec<usize>>,
    ) -> Result<PointedGSet, GSetError> {
        let size = action.first().map_or(0, Vec::len);
        if basepoint >= size {
            return Err(GSetError::BadBasepoint { basepoint, size });
        }
        let flat = validate_action(&group, size, &action)?;
        for g in 0..group.order() {
            if flat[g * size + basepoint] != basepoint {
                return Err(GSetError::BasepointMoved { basepoint, g });
            }
        }
        Ok(PointedGSet { group, size, basepoint, action: flat })
    }

    pub fn from_spec(group: Arc<Group>, spec: &PointedGSetSpec) -> Result<PointedGSet, GSetError> {
        let s = PointedGSet::new(group, spec.basepoint, spec.action.clone())?;
        if s.size != spec.size {
            return Err(GSetError::WrongLength { len: spec.size, size: s.size });
        }
        Ok(s)
    }

    pub fn to_spec(&self) -> PointedGSetSpec {
        PointedGSetSpec {
            size: self.size,
            basepoint: self.basepoint,
            action: (0..self.group.order())
                .map(|g| (0..self.size).map(|x| self.act(g, x)).collect())
                .collect(),
        }
    }

    /// The one-point G-set (just a basepoint).
    pub fn one_point(group: Arc<Group>) -> PointedGSet {
        let action = vec![0; group.order()];
        PointedGSet { group, size: 1, basepoint: 0, action }
    }

    /// (⊔ᵢ G/Hᵢ)⁺ — disjoint cosets with a basepoint adjoined at the end.
    pub fn orbit_sum_plus(group: Arc<Group>, isotropy: &[Subgroup]) -> PointedGSet {
        let blocks: Vec<GSet> = isotropy.iter().map(|h| GSet::cosets(group.clone(), h)).collect();
        let size: usize = blocks.iter().map(GSet::size).sum();
        let order = group.order();
        let mut action = vec![Vec::with_capacity(size + 1); order];
        let mut offset = 0;
        for b in &blocks {
            for (g, row) in action.iter_mut().enumerate() {
                row.extend((0..b.size()).map(|x| b.act(g, x) + offset));
            }
            offset += b.size();
        }
        for row in &mut action {
            row.push(size);
        }
        let flat = action.into_iter().flatten().collect();
        PointedGSet { group, size: size + 1, basepoint: size, action: flat }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.size + x]
    }

    /// The isotropy subgroup G_x = {g : gx = x}.
    pub fn isotropy(&self, x: usize) -> Subgroup {
        let elements: Vec<usize> = self.group.elements().filter(|&g| self.act(g, x) == x).collect();
        self.group.subgroup_from_elements(&elements).expect("stabilizers are subgroups")
    }

    /// Orbit partition as (minimal representative, sorted orbit), ordered by
    /// representative.
    pub fn orbits(&self) -> Vec<(usize, Vec<usize>)> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.group.elements().map(|g| self.act(g, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push((x, orbit));
        }
        out
    }

    /// Minimal index in the orbit of x.
    pub fn orbit_rep(&self, x: usize) -> usize {
        self.group.elements().map(|g| self.act(g, x)).min().expect("group nonempty")
    }

    /// The minimal group element carrying the orbit representative to x.
    pub fn translation_from_rep(&self, x: usize) -> usize {
        let r = self.orbit_rep(x);
        self.group
            .elements()
            .find(|&g| self.act(g, r) == x)
            .expect("x is in the orbit of its representative")
    }

    /// {x : hx = x for all h ∈ H}, sorted; always contains the basepoint.
    pub fn fixed_points(&self, h: &Subgroup) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| h.elements().iter().all(|&g| self.act(g, x) == x))
            .collect()
    }

    /// Wedge S ∨ T: basepoints identified. Keeps S's indices; T's
    /// non-basepoint elements follow in order. Returns the wedge and the two
    /// inclusions.
    pub fn wedge(
        a: &Arc<PointedGSet>,
        b: &Arc<PointedGSet>,
    ) -> Result<(Arc<PointedGSet>, PointedGMap, PointedGMap), GSetError> {
        if a.group != b.group {
            return Err(GSetError::GroupMismatch);
        }
        let size = a.size + b.size - 1;
        // index mapping for b: skip its basepoint
        let mut b_index = vec![usize::MAX; b.size];
        let mut next = a.size;
        for x in 0..b.size {
            if x == b.basepoint {
                b_index[x] = a.basepoint;
            } else {
                b_index[x] = next;
                next += 1;
            }
        }
        let b_back: Vec<usize> = (0..b.size).filter(|&x| x != b.basepoint).collect();
        let order = a.group.order();
        let mut action = Vec::with_capacity(order * size);
        for g in 0..order {
            for x in 0..a.size {
                action.push(a.act(g, x));
            }
            for &x in &b_back {
                action.push(b_index[b.act(g, x)]);
            }
        }
        let w = Arc::new(PointedGSet {
            group: a.group.clone(),
            size,
            basepoint: a.basepoint,
            action,
        });
        let inc_a = PointedGMap {
            source: a.clone(),
            target: w.clone(),
            values: (0..a.size).collect(),
        };
        let inc_b = PointedGMap { source: b.clone(), target: w.clone(), values: b_index };
        Ok((w, inc_a, inc_b))
    }

    /// A random pointed G-set (⊔ᵢ G/Hᵢ)⁺ with 1–4 orbits.
    pub fn random<R: Rng>(group: Arc<Group>, rng: &mut R) -> PointedGSet {
        let subs = group.all_subgroups();
        let count = rng.gen_range(1..=4);
        let picks: Vec<Subgroup> =
            (0..count).map(|_| subs[rng.gen_range(0..subs.len())].clone()).collect();
        PointedGSet::orbit_sum_plus(group, &picks)
    }
}

impl std::fmt::Debug for PointedGSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PointedGSet(size {}, basepoint {})", self.size, self.basepoint)
    }
}

/// A basepoint-preserving equivariant map of pointed G-sets.
#[derive(Clone, PartialEq, Eq)]
pub struct PointedGMap {
    source: Arc<PointedGSet>,
    target: Arc<PointedGSet>,
    values: Vec<usize>,
}

impl PointedGMap {
    pub fn new(
        source: Arc<PointedGSet>,
        target: Arc<PointedGSet>,
        values: Vec<usize>,
    ) -> Result<PointedGMap, GSetError> {
        if source.group != target.group {
            return Err(GSetError::GroupMismatch);
        }
        if values.len() != source.size {
            return Err(GSetError::WrongLength { len: values.len(), size: source.size });
        }
        for &v in &values {
            if v >= target.size {
                return Err(GSetError::ValueOutOfRange { value: v, size: target.size });
            }
        }
        if values[source.basepoint] != target.basepoint {
            return Err(GSetError::BasepointNotPreserved);
        }
        for g in source.group.elements() {
            for x in 0..source.size {
                if values[source.act(g, x)] != target.act(g, values[x]) {
                    return Err(GSetError::NotEquivariant { g, x });
                }
            }
        }
        Ok(PointedGMap { source, target, values })
    }

    pub fn identity(s: &Arc<PointedGSet>) -> PointedGMap {
        PointedGMap { source: s.clone(), target: s.clone(), values: (0..s.size).collect() }
    }

    /// The map collapsing everything to the basepoint.
    pub fn collapse(source: &Arc<PointedGSet>, target: &Arc<PointedGSet>) -> PointedGMap {
        PointedGMap {
            source: source.clone(),
            target: target.clone(),
            values: vec![target.basepoint; source.size],
        }
    }

    pub fn source(&self) -> &Arc<PointedGSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PointedGSet> {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn compose(outer: &PointedGMap, inner: &PointedGMap) -> Result<PointedGMap, GSetError> {
        if inner.target != outer.source {
            return Err(GSetError::GroupMismatch);
        }
        Ok(PointedGMap {
            source: inner.source.clone(),
            target: outer.target.clone(),
            values: inner.values.iter().map(|&x| outer.values[x]).collect(),
        })
    }

    /// A random pointed G-map: each orbit representative r goes to a uniform
    /// random point of the target fixed by the isotropy of r, extended
    /// equivariantly by f(g·r) = g·f(r).
    pub fn random<R: Rng>(
        source: &Arc<PointedGSet>,
        target: &Arc<PointedGSet>,
        rng: &mut R,
    ) -> PointedGMap {
        assert_eq!(source.group, target.group);
        let mut values = vec![usize::MAX; source.size];
        for (rep, orbit) in source.orbits() {
            let y = if rep == source.basepoint {
                target.basepoint
            } else {
                let candidates = target.fixed_points(&source.isotropy(rep));
                *candidates.choose(rng).expect("basepoint is always fixed")
            };
            for &x in &orbit {
                let g = source
                    .group
                    .elements()
                    .find(|&g| source.act(g, rep) == x)
                    .expect("orbit element");
                // well-defined: any g with g·rep = x differs by isotropy,
                // which fixes y
                values[x] = target.act(g, y);
            }
        }
        PointedGMap { source: source.clone(), target: target.clone(), values }
    }

    pub fn to_spec(&self) -> GMapSpec {
        GMapSpec { values: self.values.clone() }
    }
}

impl std::fmt::Debug for PointedGMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PointedGMap({:?})", self.values)
    }
}
