//! Finite-type pointed simplicial G-sets: nondegenerate cells per dimension,
//! face maps encoded as formal simplices (degeneracy word + nondegenerate
//! base), and a levelwise G-action by simplicial automorphisms.
//!
//! Builders ingest ordered G-simplicial complexes (order total on each
//! simplex and preserved by the action); arbitrary complexes pass through
//! barycentric subdivision first, which makes them orderable by
//! dimension-then-id of barycenters. Subobjects (fixed subcomplexes, orbit
//! quotients, wedges), pointed simplicial G-maps, and simplicial homotopies
//! round out the toolkit consumed by the homology layer.

use crate::group::{Group, Subgroup};
use crate::gset::GSet;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("malformed simplicial data: {0}")]
    Malformed(String),
    #[error("identity element moves a cell in dimension {dim}")]
    IdentityMoves { dim: usize },
    #[error("action tables do not define a group action in dimension {dim}")]
    NotAnAction { dim: usize },
    #[error("basepoint vertex is moved by the action")]
    BasepointMoved,
    #[error("bad basepoint: {0}")]
    BadBasepoint(String),
    #[error("face map does not commute with the action: dimension {dim}, cell {cell}, face {index}, element {g}")]
    FaceActionMismatch { dim: usize, cell: usize, index: usize, g: usize },
    #[error("simplicial identity d_{i} d_{j} = d_{jm1} d_{i} fails on cell {cell} in dimension {dim}", jm1 = j - 1)]
    SimplicialIdentity { dim: usize, cell: usize, i: usize, j: usize },
    #[error("simplex list is not closed under faces (missing a face of {0:?})")]
    NotClosedUnderFaces(Vec<usize>),
    #[error("simplex list is not closed under the action (image of {0:?} missing)")]
    NotClosedUnderAction(Vec<usize>),
    #[error("order is not total on simplex {0:?}")]
    OrderNotTotalOnSimplex(Vec<usize>),
    #[error("order is not preserved by the action on simplex {0:?}")]
    OrderNotInvariant(Vec<usize>),
    #[error("inputs live over different groups")]
    GroupMismatch,
    #[error("map source or target does not match")]
    SpaceMismatch,
    #[error("map does not commute with face {index} on cell {cell} in dimension {dim}")]
    NotSimplicial { dim: usize, cell: usize, index: usize },
    #[error("map does not commute with the action")]
    NotEquivariant,
    #[error("map does not preserve the basepoint")]
    BasepointNotPreserved,
    #[error("homotopy identity fails: {0}")]
    HomotopyIdentity(String),
    #[error("unknown builtin space `{0}`")]
    UnknownBuiltin(String),
    #[error("builtin `{builtin}` needs {needs}")]
    UnsupportedGroup { builtin: String, needs: String },
}

/// Normalizes a degeneracy word (letters applied right to left) to the
/// canonical strictly decreasing form using s_i s_j = s_{j+1} s_i for i ≤ j.
fn normalize_word(letters: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(letters.len());
    for &p in letters.iter().rev() {
        let mut pos = 0;
        while pos < out.len() && p <= out[pos] {
            out[pos] += 1;
            pos += 1;
        }
        out.insert(pos, p);
    }
    out
}

/// A possibly degenerate simplex: a canonical degeneracy word applied to a
/// nondegenerate cell `(dim, cell)`. The word is strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalSimplex {
    word: Vec<usize>,
    dim: usize,
    cell: usize,
}

impl FormalSimplex {
    pub fn vertex(cell: usize) -> FormalSimplex {
        FormalSimplex { word: Vec::new(), dim: 0, cell }
    }

    pub fn nondegenerate(dim: usize, cell: usize) -> FormalSimplex {
        FormalSimplex { word: Vec::new(), dim, cell }
    }

    /// Builds a formal simplex from an explicit word, validating the
    /// canonical form.
    pub fn new(word: Vec<usize>, dim: usize, cell: usize) -> Result<FormalSimplex, SimplicialError> {
        let k = word.len();
        for (m, &j) in word.iter().enumerate() {
            // the m-th letter from the left is applied to a (dim + k - 1 - m)-simplex
            if j > dim + (k - 1 - m) {
                return Err(SimplicialError::Malformed(format!(
                    "degeneracy index {j} out of range in word {word:?} over dimension {dim}"
                )));
            }
            if m + 1 < k && word[m + 1] >= j {
                return Err(SimplicialError::Malformed(format!(
                    "degeneracy word {word:?} is not strictly decreasing"
                )));
            }
        }
        Ok(FormalSimplex { word, dim, cell })
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn base_dim(&self) -> usize {
        self.dim
    }

    pub fn base_cell(&self) -> usize {
        self.cell
    }

    pub fn total_dim(&self) -> usize {
        self.dim + self.word.len()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.word.is_empty()
    }

    /// The degeneracy s_j applied to this simplex.
    pub fn degenerate(&self, j: usize) -> FormalSimplex {
        assert!(j <= self.total_dim(), "degeneracy index out of range");
        let mut letters = Vec::with_capacity(self.word.len() + 1);
        letters.push(j);
        letters.extend_from_slice(&self.word);
        FormalSimplex { word: normalize_word(&letters), dim: self.dim, cell: self.cell }
    }

    /// The canonical (total_dim = q) degeneracy of a vertex, word
    /// s_{q-1}…s_1s_0.
    pub fn degenerate_vertex(cell: usize, q: usize) -> FormalSimplex {
        FormalSimplex { word: (0..q).rev().collect(), dim: 0, cell }
    }
}

/// JSON form of a formal simplex: `{"word": [...], "dim": d, "cell": c}`.
#[derive(Serialize, Deserialize)]
pub struct FormalSpec {
    pub word: Vec<usize>,
    pub dim: usize,
    pub cell: usize,
}

/// JSON form of a simplicial G-set. `faces` is keyed by the dimension (as a
/// string); `action[q][g]` is the permutation of the q-cells by g.
#[derive(Serialize, Deserialize)]
pub struct SimplicialSpec {
    pub dims: usize,
    pub cells: Vec<usize>,
    pub faces: BTreeMap<String, Vec<Vec<FormalSpec>>>,
    pub action: Vec<Vec<Vec<usize>>>,
    pub basepoint: usize,
}

/// A finite pointed simplicial G-set: cell counts per dimension, stored faces
/// of every nondegenerate cell, a levelwise action commuting with faces, and
/// a G-fixed basepoint vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialGSet {
    group: Arc<Group>,
    cells: Vec<usize>,
    /// faces[q-1][cell][i] is d_i of the given q-cell, for q in 1..=dim.
    faces: Vec<Vec<Vec<FormalSimplex>>>,
    /// action[q][g][cell]
    action: Vec<Vec<Vec<usize>>>,
    basepoint: usize,
}

impl SimplicialGSet {
    pub fn new(
        group: Arc<Group>,
        mut cells: Vec<usize>,
        mut faces: Vec<Vec<Vec<FormalSimplex>>>,
        mut action: Vec<Vec<Vec<usize>>>,
        basepoint: usize,
    ) -> Result<SimplicialGSet, SimplicialError> {
        if cells.is_empty() {
            return Err(SimplicialError::Malformed("no dimensions given".into()));
        }
        // trim empty top dimensions so equal spaces compare equal
        while cells.len() > 1 && *cells.last().unwrap() == 0 {
            cells.pop();
            if faces.len() >= cells.len() {
                faces.pop();
            }
            if action.len() > cells.len() {
                action.pop();
            }
        }
        let dim = cells.len() - 1;
        if faces.len() != dim {
            return Err(SimplicialError::Malformed(format!(
                "expected face tables for {} dimensions, got {}",
                dim,
                faces.len()
            )));
        }
        if action.len() != cells.len() {
            return Err(SimplicialError::Malformed(format!(
                "expected action tables for {} dimensions, got {}",
                cells.len(),
                action.len()
            )));
        }
        if basepoint >= cells[0] {
            return Err(SimplicialError::BadBasepoint(format!(
                "vertex {basepoint} out of range"
            )));
        }
        let space = SimplicialGSet { group, cells, faces, action, basepoint };
        space.validate()?;
        Ok(space)
    }

    fn validate(&self) -> Result<(), SimplicialError> {
        let order = self.group.order();
        let dim = self.dim();
        // face table shapes and well-formed targets
        for q in 1..=dim {
            let table = &self.faces[q - 1];
            if table.len() != self.cells[q] {
                return Err(SimplicialError::Malformed(format!(
                    "face table in dimension {q} has {} rows, expected {}",
                    table.len(),
                    self.cells[q]
                )));
            }
            for (c, row) in table.iter().enumerate() {
                if row.len() != q + 1 {
                    return Err(SimplicialError::Malformed(format!(
                        "cell {c} in dimension {q} has {} faces, expected {}",
                        row.len(),
                        q + 1
                    )));
                }
                for f in row {
                    FormalSimplex::new(f.word.clone(), f.dim, f.cell)?;
                    if f.total_dim() != q - 1 {
                        return Err(SimplicialError::Malformed(format!(
                            "face of a {q}-cell has total dimension {}",
                            f.total_dim()
                        )));
                    }
                    if f.dim >= self.cells.len() || f.cell >= self.cells[f.dim] {
                        return Err(SimplicialError::Malformed(format!(
                            "face targets missing cell {} in dimension {}",
                            f.cell, f.dim
                        )));
                    }
                }
            }
        }
        // action tables: shape, identity, action law
        for q in 0..=dim {
            let table = &self.action[q];
            if table.len() != order {
                return Err(SimplicialError::Malformed(format!(
                    "action table in dimension {q} has {} rows, expected {order}",
                    table.len()
                )));
            }
            for row in table {
                if row.len() != self.cells[q] {
                    return Err(SimplicialError::Malformed(format!(
                        "action row in dimension {q} has wrong length"
                    )));
                }
                if row.iter().any(|&c| c >= self.cells[q]) {
                    return Err(SimplicialError::Malformed(format!(
                        "action value out of range in dimension {q}"
                    )));
                }
            }
            if (0..self.cells[q]).any(|c| table[0][c] != c) {
                return Err(SimplicialError::IdentityMoves { dim: q });
            }
            for g in 0..order {
                for h in 0..order {
                    let gh = self.group.mul(g, h);
                    if (0..self.cells[q]).any(|c| table[g][table[h][c]] != table[gh][c]) {
                        return Err(SimplicialError::NotAnAction { dim: q });
                    }
                }
            }
        }
        if (0..order).any(|g| self.action[0][g][self.basepoint] != self.basepoint) {
            return Err(SimplicialError::BasepointMoved);
        }
        // action commutes with faces
        for q in 1..=dim {
            for c in 0..self.cells[q] {
                for i in 0..=q {
                    for g in 0..order {
                        let lhs = self.face(q, self.act(q, g, c), i);
                        let rhs = self.act_formal(g, self.face(q, c, i));
                        if *lhs != rhs {
                            return Err(SimplicialError::FaceActionMismatch {
                                dim: q,
                                cell: c,
                                index: i,
                                g,
                            });
                        }
                    }
                }
            }
        }
        // simplicial identities d_i d_j = d_{j-1} d_i for i < j
        for q in 2..=dim {
            for c in 0..self.cells[q] {
                for j in 1..=q {
                    for i in 0..j {
                        let lhs = self.face_of(self.face(q, c, j), i);
                        let rhs = self.face_of(self.face(q, c, i), j - 1);
                        if lhs != rhs {
                            return Err(SimplicialError::SimplicialIdentity { dim: q, cell: c, i, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    /// Number of nondegenerate q-cells (0 above the top dimension).
    pub fn cell_count(&self, q: usize) -> usize {
        self.cells.get(q).copied().unwrap_or(0)
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    /// The stored face d_i of a nondegenerate q-cell (q ≥ 1).
    pub fn face(&self, q: usize, cell: usize, i: usize) -> &FormalSimplex {
        &self.faces[q - 1][cell][i]
    }

    pub fn act(&self, q: usize, g: usize, cell: usize) -> usize {
        self.action[q][g][cell]
    }

    pub fn act_formal(&self, g: usize, f: &FormalSimplex) -> FormalSimplex {
        FormalSimplex {
            word: f.word.clone(),
            dim: f.dim,
            cell: self.act(f.dim, g, f.cell),
        }
    }

    /// The face d_i of an arbitrary formal simplex, pushing d_i through the
    /// degeneracy word with d_i s_j = s_{j-1} d_i (i < j), = id (i = j, j+1),
    /// = s_j d_{i-1} (i > j+1).
    pub fn face_of(&self, f: &FormalSimplex, i: usize) -> FormalSimplex {
        assert!(f.total_dim() >= 1 && i <= f.total_dim(), "face index out of range");
        let mut i = i;
        let mut prefix: Vec<usize> = Vec::with_capacity(f.word.len());
        for (pos, &j) in f.word.iter().enumerate() {
            if i < j {
                prefix.push(j - 1);
            } else if i == j || i == j + 1 {
                prefix.extend_from_slice(&f.word[pos + 1..]);
                return FormalSimplex { word: normalize_word(&prefix), dim: f.dim, cell: f.cell };
            } else {
                prefix.push(j);
                i -= 1;
            }
        }
        let stored = self.face(f.dim, f.cell, i);
        prefix.extend_from_slice(&stored.word);
        FormalSimplex { word: normalize_word(&prefix), dim: stored.dim, cell: stored.cell }
    }

    /// G-orbits of the nondegenerate q-cells as (minimal representative,
    /// sorted orbit) pairs, ordered by representative.
    pub fn orbits(&self, q: usize) -> Vec<(usize, Vec<usize>)> {
        let n = self.cell_count(q);
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for c in 0..n {
            if seen[c] {
                continue;
            }
            let mut orbit: Vec<usize> = self.group.elements().map(|g| self.act(q, g, c)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &x in &orbit {
                seen[x] = true;
            }
            out.push((c, orbit));
        }
        out
    }

    /// The minimal cell in the orbit of the given q-cell.
    pub fn orbit_rep(&self, q: usize, cell: usize) -> usize {
        self.group
            .elements()
            .map(|g| self.act(q, g, cell))
            .min()
            .expect("groups are nonempty")
    }

    /// The minimal g carrying the orbit representative to this cell.
    pub fn translation_from_rep(&self, q: usize, cell: usize) -> usize {
        let rep = self.orbit_rep(q, cell);
        self.group
            .elements()
            .find(|&g| self.act(q, g, rep) == cell)
            .expect("representative lies in the same orbit")
    }

    /// The stabilizer of a nondegenerate q-cell.
    pub fn isotropy(&self, q: usize, cell: usize) -> Subgroup {
        let fixed: Vec<usize> = self
            .group
            .elements()
            .filter(|&g| self.act(q, g, cell) == cell)
            .collect();
        self.group
            .subgroup_from_elements(&fixed)
            .expect("stabilizers are subgroups")
    }

    /// Connectivity of the underlying space: vertices joined by the
    /// nondegenerate 1-cells.
    pub fn is_connected(&self) -> bool {
        let n = self.cells[0];
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            let mut x = x;
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in 0..self.cell_count(1) {
            let a = find(&mut parent, self.face(1, e, 0).cell);
            let b = find(&mut parent, self.face(1, e, 1).cell);
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (1..n).all(|v| find(&mut parent, v) == root)
    }

    pub fn to_spec(&self) -> SimplicialSpec {
        let faces = (1..=self.dim())
            .map(|q| {
                let rows = self.faces[q - 1]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|f| FormalSpec { word: f.word.clone(), dim: f.dim, cell: f.cell })
                            .collect()
                    })
                    .collect();
                (q.to_string(), rows)
            })
            .collect();
        SimplicialSpec {
            dims: self.dim(),
            cells: self.cells.clone(),
            faces,
            action: self.action.clone(),
            basepoint: self.basepoint,
        }
    }

    pub fn from_spec(group: Arc<Group>, spec: &SimplicialSpec) -> Result<SimplicialGSet, SimplicialError> {
        if spec.cells.len() != spec.dims + 1 {
            return Err(SimplicialError::Malformed(format!(
                "dims is {} but {} cell counts given",
                spec.dims,
                spec.cells.len()
            )));
        }
        let mut faces = Vec::with_capacity(spec.dims);
        for q in 1..=spec.dims {
            let rows = spec.faces.get(&q.to_string()).ok_or_else(|| {
                SimplicialError::Malformed(format!("missing face table for dimension {q}"))
            })?;
            faces.push(
                rows.iter()
                    .map(|row| {
                        row.iter()
                            .map(|f| FormalSimplex::new(f.word.clone(), f.dim, f.cell))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        SimplicialGSet::new(group, spec.cells.clone(), faces, spec.action.clone(), spec.basepoint)
    }
}

/// A finite G-simplicial complex: a G-set of vertices and a family of vertex
/// sets closed under nonempty subsets and under the action.
#[derive(Clone, Debug)]
pub struct GComplex {
    vertices: GSet,
    simplices: Vec<Vec<usize>>,
}

impl GComplex {
    pub fn new(vertices: GSet, simplices: Vec<Vec<usize>>) -> Result<GComplex, SimplicialError> {
        let mut canonical: Vec<Vec<usize>> = Vec::new();
        for s in simplices {
            let mut s = s;
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(SimplicialError::Malformed("empty simplex".into()));
            }
            if s.iter().any(|&v| v >= vertices.size()) {
                return Err(SimplicialError::Malformed(format!(
                    "simplex {s:?} uses an out-of-range vertex"
                )));
            }
            canonical.push(s);
        }
        canonical.sort();
        canonical.dedup();
        let complex = GComplex { vertices, simplices: canonical };
        complex.check_closure()?;
        Ok(complex)
    }

    fn check_closure(&self) -> Result<(), SimplicialError> {
        let have: std::collections::BTreeSet<&Vec<usize>> = self.simplices.iter().collect();
        for s in &self.simplices {
            if s.len() > 1 {
                for skip in 0..s.len() {
                    let face: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    if !have.contains(&face) {
                        return Err(SimplicialError::NotClosedUnderFaces(s.clone()));
                    }
                }
            }
            for g in self.vertices.group().elements() {
                let mut image: Vec<usize> = s.iter().map(|&v| self.vertices.act(g, v)).collect();
                image.sort_unstable();
                if !have.contains(&image) {
                    return Err(SimplicialError::NotClosedUnderAction(s.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &GSet {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }
}

/// A G-complex together with a vertex order (as a rank function) that is
/// total on each simplex and preserved by the action.
#[derive(Clone, Debug)]
pub struct OrderedGComplex {
    complex: GComplex,
    rank: Vec<u64>,
}

impl OrderedGComplex {
    pub fn new(
        vertices: GSet,
        simplices: Vec<Vec<usize>>,
        rank: Vec<u64>,
    ) -> Result<OrderedGComplex, SimplicialError> {
        let complex = GComplex::new(vertices, simplices)?;
        if rank.len() != complex.vertices.size() {
            return Err(SimplicialError::Malformed(format!(
                "rank table has {} entries for {} vertices",
                rank.len(),
                complex.vertices.size()
            )));
        }
        let ordered = OrderedGComplex { complex, rank };
        for s in &ordered.complex.simplices {
            let sorted = ordered.by_rank(s);
            for w in sorted.windows(2) {
                if ordered.rank[w[0]] == ordered.rank[w[1]] {
                    return Err(SimplicialError::OrderNotTotalOnSimplex(s.clone()));
                }
            }
            for g in ordered.complex.vertices.group().elements() {
                let mapped: Vec<usize> =
                    sorted.iter().map(|&v| ordered.complex.vertices.act(g, v)).collect();
                let mut image = mapped.clone();
                image.sort_unstable();
                if ordered.by_rank(&image) != mapped {
                    return Err(SimplicialError::OrderNotInvariant(s.clone()));
                }
            }
        }
        Ok(ordered)
    }

    fn by_rank(&self, simplex: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = simplex.to_vec();
        v.sort_by_key(|&x| (self.rank[x], x));
        v
    }

    pub fn complex(&self) -> &GComplex {
        &self.complex
    }
}

/// How a builder obtains the required G-fixed basepoint vertex.
#[derive(Clone, Copy, Debug)]
pub enum BasepointSpec {
    /// Use an existing G-fixed vertex.
    Vertex(usize),
    /// Adjoin a disjoint fixed vertex (the plus construction).
    Adjoin,
    /// Collapse the G-orbit of the given vertex to a single fixed vertex.
    CollapseOrbit(usize),
}

/// The simplicial G-set of an ordered G-complex: nondegenerate q-cells are
/// the q-simplices with vertices in rank order, and d_i deletes the i-th
/// vertex.
pub fn from_ordered_complex(
    ordered: &OrderedGComplex,
    basepoint: BasepointSpec,
) -> Result<SimplicialGSet, SimplicialError> {
    let complex = &ordered.complex;
    let group = complex.vertices.group().clone();
    let dim = complex.simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0);
    // per-dimension cell lists (canonical set form) and index lookup
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
    for s in &complex.simplices {
        by_dim[s.len() - 1].push(s.clone());
    }
    let index: Vec<BTreeMap<&Vec<usize>, usize>> = by_dim
        .iter()
        .map(|list| list.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();

    let mut cells: Vec<usize> = by_dim.iter().map(Vec::len).collect();
    let mut faces: Vec<Vec<Vec<FormalSimplex>>> = Vec::with_capacity(dim);
    for q in 1..=dim {
        let rows = by_dim[q]
            .iter()
            .map(|s| {
                let sorted = ordered.by_rank(s);
                (0..=q)
                    .map(|i| {
                        let mut face: Vec<usize> = sorted.clone();
                        face.remove(i);
                        face.sort_unstable();
                        FormalSimplex::nondegenerate(q - 1, index[q - 1][&face])
                    })
                    .collect()
            })
            .collect();
        faces.push(rows);
    }
    let mut action: Vec<Vec<Vec<usize>>> = (0..=dim)
        .map(|q| {
            (0..group.order())
                .map(|g| {
                    by_dim[q]
                        .iter()
                        .map(|s| {
                            let mut image: Vec<usize> =
                                s.iter().map(|&v| complex.vertices.act(g, v)).collect();
                            image.sort_unstable();
                            index[q][&image]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let vertex_cell = |v: usize| -> Result<usize, SimplicialError> {
        index[0].get(&vec![v]).copied().ok_or_else(|| {
            SimplicialError::BadBasepoint(format!("vertex {v} is not a cell of the complex"))
        })
    };

    let bp = match basepoint {
        BasepointSpec::Vertex(v) => {
            let c = vertex_cell(v)?;
            if (0..group.order()).any(|g| action[0][g][c] != c) {
                return Err(SimplicialError::BadBasepoint(format!(
                    "vertex {v} is not fixed by the action"
                )));
            }
            c
        }
        BasepointSpec::Adjoin => {
            let c = cells[0];
            cells[0] += 1;
            for row in &mut action[0] {
                row.push(c);
            }
            c
        }
        BasepointSpec::CollapseOrbit(v) => {
            let c = vertex_cell(v)?;
            let mut orbit: Vec<usize> = (0..group.order()).map(|g| action[0][g][c]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            // non-orbit vertices keep their order; the merged vertex goes last
            let keep: Vec<usize> =
                (0..cells[0]).filter(|x| orbit.binary_search(x).is_err()).collect();
            let bp = keep.len();
            let mut remap = vec![bp; cells[0]];
            for (new, &old) in keep.iter().enumerate() {
                remap[old] = new;
            }
            action[0] = (0..group.order())
                .map(|g| {
                    let old_row = keep.iter().map(|&old| remap[action[0][g][old]]);
                    old_row.chain(std::iter::once(bp)).collect()
                })
                .collect();
            cells[0] = keep.len() + 1;
            for row in faces.first_mut().into_iter().flatten() {
                for f in row {
                    f.cell = remap[f.cell];
                }
            }
            bp
        }
    };
    SimplicialGSet::new(group, cells, faces, action, bp)
}

/// Barycentric subdivision: vertices are the simplices of the input (sorted
/// by dimension then lexicographically), simplices are the inclusion flags,
/// and the rank is the vertex index — total on flags and G-invariant because
/// the action preserves dimension.
pub fn barycentric_subdivide(complex: &GComplex) -> Result<OrderedGComplex, SimplicialError> {
    let mut verts: Vec<Vec<usize>> = complex.simplices.to_vec();
    verts.sort_by_key(|s| (s.len(), s.clone()));
    let index: BTreeMap<&Vec<usize>, usize> =
        verts.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let group = complex.vertices.group().clone();
    let action: Vec<Vec<usize>> = (0..group.order())
        .map(|g| {
            verts
                .iter()
                .map(|s| {
                    let mut image: Vec<usize> =
                        s.iter().map(|&v| complex.vertices.act(g, v)).collect();
                    image.sort_unstable();
                    index[&image]
                })
                .collect()
        })
        .collect();
    let vertices = GSet::new(group, action).map_err(|e| {
        SimplicialError::Malformed(format!("subdivision vertex action invalid: {e}"))
    })?;
    // enumerate all flags s_0 ⊂ s_1 ⊂ … (as index chains)
    let mut flags: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..verts.len()).map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        flags.push(chain.clone());
        let last = *chain.last().unwrap();
        for next in 0..verts.len() {
            if verts[next].len() > verts[last].len()
                && verts[last].iter().all(|v| verts[next].contains(v))
            {
                let mut longer = chain.clone();
                longer.push(next);
                stack.push(longer);
            }
        }
    }
    let rank: Vec<u64> = (0..verts.len() as u64).collect();
    OrderedGComplex::new(vertices, flags, rank)
}

/// The subcomplex of cells fixed by every element of H, as a simplicial set
/// over the trivial group. Faces of fixed cells are fixed, so the result is
/// closed under faces.
pub fn fixed_subcomplex(k: &SimplicialGSet, h: &Subgroup) -> SimplicialGSet {
    let mut keep: Vec<Vec<usize>> = Vec::with_capacity(k.cells.len());
    let mut remap: Vec<Vec<usize>> = Vec::with_capacity(k.cells.len());
    for q in 0..=k.dim() {
        let fixed: Vec<usize> = (0..k.cells[q])
            .filter(|&c| h.elements().iter().all(|&g| k.act(q, g, c) == c))
            .collect();
        let mut map = vec![usize::MAX; k.cells[q]];
        for (new, &old) in fixed.iter().enumerate() {
            map[old] = new;
        }
        keep.push(fixed);
        remap.push(map);
    }
    let cells: Vec<usize> = keep.iter().map(Vec::len).collect();
    let faces: Vec<Vec<Vec<FormalSimplex>>> = (1..=k.dim())
        .map(|q| {
            keep[q]
                .iter()
                .map(|&old| {
                    (0..=q)
                        .map(|i| {
                            let f = k.face(q, old, i);
                            FormalSimplex {
                                word: f.word.clone(),
                                dim: f.dim,
                                cell: remap[f.dim][f.cell],
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let action: Vec<Vec<Vec<usize>>> =
        cells.iter().map(|&n| vec![(0..n).collect()]).collect();
    SimplicialGSet::new(
        Arc::new(Group::trivial()),
        cells,
        faces,
        action,
        remap[0][k.basepoint],
    )
    .expect("fixed cells form a simplicial subset")
}

/// The orbit space K/G as a simplicial set over the trivial group: cells are
/// the G-orbits, faces are induced on representatives.
pub fn orbit_quotient(k: &SimplicialGSet) -> SimplicialGSet {
    let mut orbit_index: Vec<Vec<usize>> = Vec::with_capacity(k.cells.len());
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(k.cells.len());
    for q in 0..=k.dim() {
        let orbits = k.orbits(q);
        let mut map = vec![usize::MAX; k.cells[q]];
        for (pos, (_, orbit)) in orbits.iter().enumerate() {
            for &c in orbit {
                map[c] = pos;
            }
        }
        reps.push(orbits.iter().map(|&(r, _)| r).collect());
        orbit_index.push(map);
    }
    let cells: Vec<usize> = reps.iter().map(Vec::len).collect();
    let faces: Vec<Vec<Vec<FormalSimplex>>> = (1..=k.dim())
        .map(|q| {
            reps[q]
                .iter()
                .map(|&rep| {
                    (0..=q)
                        .map(|i| {
                            let f = k.face(q, rep, i);
                            FormalSimplex {
                                word: f.word.clone(),
                                dim: f.dim,
                                cell: orbit_index[f.dim][f.cell],
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let action: Vec<Vec<Vec<usize>>> =
        cells.iter().map(|&n| vec![(0..n).collect()]).collect();
    SimplicialGSet::new(
        Arc::new(Group::trivial()),
        cells,
        faces,
        action,
        orbit_index[0][k.basepoint],
    )
    .expect("orbits form a simplicial set")
}

/// A pointed simplicial G-map: each nondegenerate source cell is assigned a
/// formal simplex of the target of the same total dimension.
#[derive(Clone, Debug)]
pub struct SimplicialGMap {
    source: Arc<SimplicialGSet>,
    target: Arc<SimplicialGSet>,
    /// values[q][cell]
    values: Vec<Vec<FormalSimplex>>,
}

impl SimplicialGMap {
    pub fn new(
        source: Arc<SimplicialGSet>,
        target: Arc<SimplicialGSet>,
        values: Vec<Vec<FormalSimplex>>,
    ) -> Result<SimplicialGMap, SimplicialError> {
        if source.group != target.group {
            return Err(SimplicialError::GroupMismatch);
        }
        if values.len() != source.cells.len() {
            return Err(SimplicialError::Malformed(format!(
                "map assigns {} dimensions, source has {}",
                values.len(),
                source.cells.len()
            )));
        }
        for (q, row) in values.iter().enumerate() {
            if row.len() != source.cells[q] {
                return Err(SimplicialError::Malformed(format!(
                    "map row in dimension {q} has wrong length"
                )));
            }
            for f in row {
                FormalSimplex::new(f.word.clone(), f.dim, f.cell)?;
                if f.total_dim() != q {
                    return Err(SimplicialError::Malformed(format!(
                        "image of a {q}-cell has total dimension {}",
                        f.total_dim()
                    )));
                }
                if f.dim >= target.cells.len() || f.cell >= target.cells[f.dim] {
                    return Err(SimplicialError::Malformed(
                        "image targets a missing cell".into(),
                    ));
                }
            }
        }
        if values[0][source.basepoint] != FormalSimplex::vertex(target.basepoint) {
            return Err(SimplicialError::BasepointNotPreserved);
        }
        let map = SimplicialGMap { source, target, values };
        for q in 0..=map.source.dim() {
            for c in 0..map.source.cells[q] {
                for g in map.source.group.elements() {
                    let lhs = &map.values[q][map.source.act(q, g, c)];
                    let rhs = map.target.act_formal(g, &map.values[q][c]);
                    if *lhs != rhs {
                        return Err(SimplicialError::NotEquivariant);
                    }
                }
            }
        }
        for q in 1..=map.source.dim() {
            for c in 0..map.source.cells[q] {
                for i in 0..=q {
                    let lhs = map.target.face_of(&map.values[q][c], i);
                    let rhs = map.apply_formal(map.source.face(q, c, i));
                    if lhs != rhs {
                        return Err(SimplicialError::NotSimplicial { dim: q, cell: c, index: i });
                    }
                }
            }
        }
        Ok(map)
    }

    pub fn identity(k: &Arc<SimplicialGSet>) -> SimplicialGMap {
        let values = (0..=k.dim())
            .map(|q| (0..k.cells[q]).map(|c| FormalSimplex::nondegenerate(q, c)).collect())
            .collect();
        SimplicialGMap { source: k.clone(), target: k.clone(), values }
    }

    /// The map collapsing everything to the basepoint of the target.
    pub fn collapse(source: &Arc<SimplicialGSet>, target: &Arc<SimplicialGSet>) -> SimplicialGMap {
        let values = (0..=source.dim())
            .map(|q| {
                (0..source.cells[q])
                    .map(|_| FormalSimplex::degenerate_vertex(target.basepoint, q))
                    .collect()
            })
            .collect();
        SimplicialGMap { source: source.clone(), target: target.clone(), values }
    }

    pub fn source(&self) -> &Arc<SimplicialGSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialGSet> {
        &self.target
    }

    /// Image of a nondegenerate q-cell.
    pub fn apply(&self, q: usize, cell: usize) -> &FormalSimplex {
        &self.values[q][cell]
    }

    /// Image of an arbitrary formal simplex (degeneracy words compose).
    pub fn apply_formal(&self, f: &FormalSimplex) -> FormalSimplex {
        let v = &self.values[f.dim][f.cell];
        let mut letters = f.word.clone();
        letters.extend_from_slice(&v.word);
        FormalSimplex { word: normalize_word(&letters), dim: v.dim, cell: v.cell }
    }

    pub fn compose(outer: &SimplicialGMap, inner: &SimplicialGMap) -> Result<SimplicialGMap, SimplicialError> {
        if inner.target != outer.source {
            return Err(SimplicialError::SpaceMismatch);
        }
        let values = inner
            .values
            .iter()
            .map(|row| row.iter().map(|f| outer.apply_formal(f)).collect())
            .collect();
        Ok(SimplicialGMap {
            source: inner.source.clone(),
            target: outer.target.clone(),
            values,
        })
    }
}

/// The wedge K ∨ L (basepoints identified) together with the two canonical
/// inclusions. K keeps its cell indices; non-basepoint cells of L follow.
pub fn wedge(
    a: &Arc<SimplicialGSet>,
    b: &Arc<SimplicialGSet>,
) -> Result<(Arc<SimplicialGSet>, SimplicialGMap, SimplicialGMap), SimplicialError> {
    if a.group != b.group {
        return Err(SimplicialError::GroupMismatch);
    }
    let group = a.group.clone();
    let dim = a.dim().max(b.dim());
    // vertex remap for b: basepoint to a's basepoint, others appended
    let b_vertex: Vec<usize> = (0..b.cells[0])
        .map(|v| {
            if v == b.basepoint {
                a.basepoint
            } else {
                a.cells[0] + v - usize::from(v > b.basepoint)
            }
        })
        .collect();
    let b_offset: Vec<usize> = (0..=dim).map(|q| a.cell_count(q)).collect();
    let remap_b = |f: &FormalSimplex| -> FormalSimplex {
        let cell = if f.dim == 0 { b_vertex[f.cell] } else { b_offset[f.dim] + f.cell };
        FormalSimplex { word: f.word.clone(), dim: f.dim, cell }
    };

    let cells: Vec<usize> = (0..=dim)
        .map(|q| a.cell_count(q) + b.cell_count(q) - usize::from(q == 0))
        .collect();
    let faces: Vec<Vec<Vec<FormalSimplex>>> = (1..=dim)
        .map(|q| {
            let mut rows: Vec<Vec<FormalSimplex>> = Vec::with_capacity(cells[q]);
            for c in 0..a.cell_count(q) {
                rows.push((0..=q).map(|i| a.face(q, c, i).clone()).collect());
            }
            for c in 0..b.cell_count(q) {
                rows.push((0..=q).map(|i| remap_b(b.face(q, c, i))).collect());
            }
            rows
        })
        .collect();
    let action: Vec<Vec<Vec<usize>>> = (0..=dim)
        .map(|q| {
            group
                .elements()
                .map(|g| {
                    let mut row: Vec<usize> = Vec::with_capacity(cells[q]);
                    for c in 0..a.cell_count(q) {
                        row.push(a.act(q, g, c));
                    }
                    if q == 0 {
                        for v in 0..b.cells[0] {
                            if v != b.basepoint {
                                row.push(b_vertex[b.act(0, g, v)]);
                            }
                        }
                    } else {
                        for c in 0..b.cell_count(q) {
                            row.push(b_offset[q] + b.act(q, g, c));
                        }
                    }
                    row
                })
                .collect()
        })
        .collect();
    let w = Arc::new(SimplicialGSet::new(group, cells, faces, action, a.basepoint)?);
    let ia = SimplicialGMap::new(
        a.clone(),
        w.clone(),
        (0..=a.dim())
            .map(|q| (0..a.cells[q]).map(|c| FormalSimplex::nondegenerate(q, c)).collect())
            .collect(),
    )?;
    let ib = SimplicialGMap::new(
        b.clone(),
        w.clone(),
        (0..=b.dim())
            .map(|q| {
                (0..b.cells[q])
                    .map(|c| remap_b(&FormalSimplex::nondegenerate(q, c)))
                    .collect()
            })
            .collect(),
    )?;
    Ok((w, ia, ib))
}

/// Adjoins a fresh fixed basepoint vertex; the old basepoint becomes an
/// ordinary vertex. This is the plus construction on the underlying
/// (unpointed) space.
pub fn plus(k: &SimplicialGSet) -> SimplicialGSet {
    let mut cells = k.cells.clone();
    let bp = cells[0];
    cells[0] += 1;
    let mut action = k.action.clone();
    for row in &mut action[0] {
        row.push(bp);
    }
    SimplicialGSet::new(k.group.clone(), cells, k.faces.clone(), action, bp)
        .expect("adjoining a disjoint basepoint preserves validity")
}

/// A finite G-set viewed as a 0-dimensional simplicial G-set with a disjoint
/// basepoint adjoined.
pub fn from_gset_plus(s: &GSet) -> SimplicialGSet {
    let group = s.group().clone();
    let bp = s.size();
    let action = vec![group
        .elements()
        .map(|g| {
            let mut row: Vec<usize> = (0..s.size()).map(|x| s.act(g, x)).collect();
            row.push(bp);
            row
        })
        .collect()];
    SimplicialGSet::new(group, vec![s.size() + 1], Vec::new(), action, bp)
        .expect("a G-set with adjoined basepoint is a valid 0-dimensional space")
}

/// A simplicial homotopy from f to g: for each q-cell, q+1 prism pieces in
/// the target satisfying the standard simplicial homotopy identities and
/// commuting with the action.
#[derive(Clone, Debug)]
pub struct SimplicialHomotopy {
    from: SimplicialGMap,
    to: SimplicialGMap,
    /// pieces[q][cell][i] for i in 0..=q, a (q+1)-dimensional formal simplex
    pieces: Vec<Vec<Vec<FormalSimplex>>>,
}

impl SimplicialHomotopy {
    pub fn new(
        from: SimplicialGMap,
        to: SimplicialGMap,
        pieces: Vec<Vec<Vec<FormalSimplex>>>,
    ) -> Result<SimplicialHomotopy, SimplicialError> {
        if from.source != to.source || from.target != to.target {
            return Err(SimplicialError::SpaceMismatch);
        }
        let src = &from.source;
        let tgt = &from.target;
        if pieces.len() != src.cells.len() {
            return Err(SimplicialError::Malformed("homotopy has wrong number of dimensions".into()));
        }
        for (q, row) in pieces.iter().enumerate() {
            if row.len() != src.cells[q] {
                return Err(SimplicialError::Malformed(format!(
                    "homotopy row in dimension {q} has wrong length"
                )));
            }
            for cell in row {
                if cell.len() != q + 1 {
                    return Err(SimplicialError::Malformed(format!(
                        "expected {} prism pieces in dimension {q}",
                        q + 1
                    )));
                }
                for f in cell {
                    FormalSimplex::new(f.word.clone(), f.dim, f.cell)?;
                    if f.total_dim() != q + 1 {
                        return Err(SimplicialError::Malformed(
                            "prism piece has wrong dimension".into(),
                        ));
                    }
                    if f.dim >= tgt.cells.len() || f.cell >= tgt.cells[f.dim] {
                        return Err(SimplicialError::Malformed(
                            "prism piece targets a missing cell".into(),
                        ));
                    }
                }
            }
        }
        let h = SimplicialHomotopy { from, to, pieces };
        h.check_identities()?;
        Ok(h)
    }

    /// h_m applied to an arbitrary formal simplex, extended over degeneracies
    /// by h_m ∘ s_p = s_p ∘ h_{m-1} (p < m) and = s_{p+1} ∘ h_m (p ≥ m).
    fn piece_formal(&self, m: usize, f: &FormalSimplex) -> FormalSimplex {
        let mut m = m;
        let mut outer: Vec<usize> = Vec::with_capacity(f.word.len());
        for &p in &f.word {
            if p < m {
                outer.push(p);
                m -= 1;
            } else {
                outer.push(p + 1);
            }
        }
        let base = &self.pieces[f.dim][f.cell][m];
        outer.extend_from_slice(&base.word);
        FormalSimplex { word: normalize_word(&outer), dim: base.dim, cell: base.cell }
    }

    fn check_identities(&self) -> Result<(), SimplicialError> {
        let src = &self.from.source;
        let tgt = &self.from.target;
        for q in 0..=src.dim() {
            for c in 0..src.cells[q] {
                let h = &self.pieces[q][c];
                for g in src.group.elements() {
                    let moved = &self.pieces[q][src.act(q, g, c)];
                    for i in 0..=q {
                        if moved[i] != tgt.act_formal(g, &h[i]) {
                            return Err(SimplicialError::HomotopyIdentity(format!(
                                "equivariance fails on cell {c} in dimension {q}"
                            )));
                        }
                    }
                }
                if tgt.face_of(&h[0], 0) != self.from.values[q][c] {
                    return Err(SimplicialError::HomotopyIdentity(format!(
                        "d_0 h_0 != f on cell {c} in dimension {q}"
                    )));
                }
                if tgt.face_of(&h[q], q + 1) != self.to.values[q][c] {
                    return Err(SimplicialError::HomotopyIdentity(format!(
                        "d_{} h_{q} != g on cell {c} in dimension {q}",
                        q + 1
                    )));
                }
                for j in 0..q {
                    if tgt.face_of(&h[j + 1], j + 1) != tgt.face_of(&h[j], j + 1) {
                        return Err(SimplicialError::HomotopyIdentity(format!(
                            "d_{} h_{} != d_{} h_{} on cell {c} in dimension {q}",
                            j + 1,
                            j + 1,
                            j + 1,
                            j
                        )));
                    }
                }
                for j in 0..=q {
                    for i in 0..=q + 1 {
                        if i < j {
                            let lhs = tgt.face_of(&h[j], i);
                            let rhs = self.piece_formal(j - 1, src.face(q, c, i));
                            if lhs != rhs {
                                return Err(SimplicialError::HomotopyIdentity(format!(
                                    "d_{i} h_{j} != h_{} d_{i} on cell {c} in dimension {q}",
                                    j - 1
                                )));
                            }
                        } else if i > j + 1 {
                            let lhs = tgt.face_of(&h[j], i);
                            let rhs = self.piece_formal(j, src.face(q, c, i - 1));
                            if lhs != rhs {
                                return Err(SimplicialError::HomotopyIdentity(format!(
                                    "d_{i} h_{j} != h_{j} d_{} on cell {c} in dimension {q}",
                                    i - 1
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_map(&self) -> &SimplicialGMap {
        &self.from
    }

    pub fn to_map(&self) -> &SimplicialGMap {
        &self.to
    }

    /// The i-th prism piece over a nondegenerate q-cell.
    pub fn piece(&self, q: usize, cell: usize, i: usize) -> &FormalSimplex {
        &self.pieces[q][cell][i]
    }
}

pub const BUILTIN_SPACE_NAMES: &[&str] = &[
    "s0_trivial",
    "free_orbit_points",
    "circle_rotation",
    "circle_antipodal",
    "circle_reflection",
    "sphere2_antipodal",
];

fn require_order_2(group: &Arc<Group>, builtin: &str) -> Result<usize, SimplicialError> {
    if group.order() != 2 {
        return Err(SimplicialError::UnsupportedGroup {
            builtin: builtin.into(),
            needs: "a group of order 2".into(),
        });
    }
    Ok(1)
}

/// The square circle (4 vertices, 4 edges) as a G-complex, with the action
/// given per vertex.
fn square_complex(group: Arc<Group>, tau: [usize; 4]) -> GComplex {
    let action = vec![vec![0, 1, 2, 3], tau.to_vec()];
    let vertices = GSet::new(group, action).expect("square vertex action");
    let simplices = vec![
        vec![0], vec![1], vec![2], vec![3],
        vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3],
    ];
    GComplex::new(vertices, simplices).expect("square is a complex")
}

/// Built-in spaces, keyed by name.
///
/// - `s0_trivial`: two fixed vertices, one the basepoint (any group).
/// - `free_orbit_points`: the regular orbit plus a basepoint (any group).
/// - `circle_rotation`: |G| loops at the basepoint, rotated by a cyclic G —
///   the circle with its vertex orbit collapsed.
/// - `circle_antipodal`: the square circle with the half-turn, one vertex
///   orbit collapsed to the basepoint (order 2).
/// - `circle_reflection`: the subdivided square circle with the reflection
///   fixing two opposite vertices; basepoint one of them (order 2).
/// - `sphere2_antipodal`: the subdivided octahedron with the antipodal map,
///   one vertex orbit collapsed to the basepoint (order 2).
pub fn builtin_space(name: &str, group: &Arc<Group>) -> Result<SimplicialGSet, SimplicialError> {
    match name {
        "s0_trivial" => {
            let point = GSet::new(group.clone(), vec![vec![0]; group.order()])
                .expect("one fixed point");
            Ok(from_gset_plus(&point))
        }
        "free_orbit_points" => Ok(from_gset_plus(&GSet::regular(group.clone()))),
        "circle_rotation" => {
            let c = group.cyclic_generator().ok_or_else(|| SimplicialError::UnsupportedGroup {
                builtin: name.into(),
                needs: "a cyclic group".into(),
            })?;
            let n = group.order();
            // the circle with the rotation action and its single vertex
            // orbit collapsed: one fixed vertex, |G| loop edges permuted
            // regularly (edge i stands for the arc starting at c^i)
            let mut power = vec![0; n];
            for i in 1..n {
                power[i] = group.mul(c, power[i - 1]);
            }
            let mut log = vec![0; n];
            for (i, &p) in power.iter().enumerate() {
                log[p] = i;
            }
            let faces = vec![vec![vec![FormalSimplex::vertex(0), FormalSimplex::vertex(0)]; n]];
            let action = vec![
                vec![vec![0]; n],
                group
                    .elements()
                    .map(|g| (0..n).map(|i| log[group.mul(g, power[i])]).collect())
                    .collect(),
            ];
            SimplicialGSet::new(group.clone(), vec![1, n], faces, action, 0)
        }
        "circle_antipodal" => {
            require_order_2(group, name)?;
            let square = square_complex(group.clone(), [2, 3, 0, 1]);
            let ordered = OrderedGComplex::new(
                square.vertices.clone(),
                square.simplices.clone(),
                vec![0, 1, 0, 1],
            )?;
            from_ordered_complex(&ordered, BasepointSpec::CollapseOrbit(0))
        }
        "circle_reflection" => {
            require_order_2(group, name)?;
            let square = square_complex(group.clone(), [0, 3, 2, 1]);
            let ordered = barycentric_subdivide(&square)?;
            // vertex 0 of the subdivision is the barycenter of {0}, a fixed
            // vertex of the original square
            from_ordered_complex(&ordered, BasepointSpec::Vertex(0))
        }
        "sphere2_antipodal" => {
            require_order_2(group, name)?;
            // octahedron: vertices 0..6 with i and i+3 antipodal
            let action = vec![
                vec![0, 1, 2, 3, 4, 5],
                vec![3, 4, 5, 0, 1, 2],
            ];
            let vertices = GSet::new(group.clone(), action).expect("antipodal vertex action");
            let mut simplices: Vec<Vec<usize>> = (0..6).map(|i| vec![i]).collect();
            for i in 0..6 {
                for j in i + 1..6 {
                    if j != i + 3 {
                        simplices.push(vec![i, j]);
                    }
                }
            }
            for i in [0, 3] {
                for j in [1, 4] {
                    for k in [2, 5] {
                        let mut t = vec![i, j, k];
                        t.sort_unstable();
                        simplices.push(t);
                    }
                }
            }
            let octahedron = GComplex::new(vertices, simplices)?;
            let ordered = barycentric_subdivide(&octahedron)?;
            from_ordered_complex(&ordered, BasepointSpec::CollapseOrbit(0))
        }
        other => Err(SimplicialError::UnknownBuiltin(other.into())),
    }
}

/// A random small pointed simplicial G-set: a random G-complex of dimension
/// at most two, barycentrically subdivided (which makes it orderable), with
/// either an adjoined or a collapsed basepoint.
pub fn random_space<R: Rng>(group: &Arc<Group>, rng: &mut R) -> SimplicialGSet {
    let order = group.order();
    let subgroups = group.all_subgroups();
    loop {
        // vertices: one or two orbits of cosets
        let orbit_count = rng.gen_range(1..=2);
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); order];
        for _ in 0..orbit_count {
            let h = &subgroups[rng.gen_range(0..subgroups.len())];
            let cosets = GSet::cosets(group.clone(), h);
            let offset = rows[0].len();
            for (g, row) in rows.iter_mut().enumerate() {
                row.extend((0..cosets.size()).map(|x| offset + cosets.act(g, x)));
            }
        }
        let vertices = GSet::new(group.clone(), rows).expect("disjoint unions of orbits act");
        let n = vertices.size();
        let mut simplices: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        // a few edge orbits
        for _ in 0..rng.gen_range(0..=3) {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b {
                continue;
            }
            for g in group.elements() {
                let mut e = vec![vertices.act(g, a), vertices.act(g, b)];
                e.sort_unstable();
                simplices.push(e);
            }
        }
        // occasionally a triangle orbit with its edges
        if rng.gen_bool(0.4) && n >= 3 {
            let mut t = vec![
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            ];
            t.sort_unstable();
            t.dedup();
            if t.len() == 3 {
                for g in group.elements() {
                    let mut img: Vec<usize> = t.iter().map(|&v| vertices.act(g, v)).collect();
                    img.sort_unstable();
                    simplices.push(vec![img[0], img[1]]);
                    simplices.push(vec![img[0], img[2]]);
                    simplices.push(vec![img[1], img[2]]);
                    simplices.push(img);
                }
            }
        }
        let Ok(complex) = GComplex::new(vertices, simplices) else {
            continue;
        };
        let Ok(ordered) = barycentric_subdivide(&complex) else {
            continue;
        };
        let bp = if rng.gen_bool(0.5) {
            BasepointSpec::Adjoin
        } else {
            // subdivision vertices are the original simplices, so any index
            // below that count names a vertex cell
            BasepointSpec::CollapseOrbit(rng.gen_range(0..complex.simplices().len()))
        };
        if let Ok(space) = from_ordered_complex(&ordered, bp) {
            return space;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z2() -> Arc<Group> {
        Arc::new(Group::cyclic(2))
    }

    fn trivial() -> Arc<Group> {
        Arc::new(Group::trivial())
    }

    #[test]
    fn degeneracy_words_normalize() {
        // s_0 s_0 = s_1 s_0 and s_1 s_1 = s_2 s_1
        assert_eq!(normalize_word(&[0, 0]), vec![1, 0]);
        assert_eq!(normalize_word(&[1, 1]), vec![2, 1]);
        assert_eq!(normalize_word(&[2, 1, 0]), vec![2, 1, 0]);
        assert_eq!(normalize_word(&[0, 1, 2]), vec![4, 2, 0]);
    }

    #[test]
    fn faces_of_degenerate_simplices() {
        // an interval: two vertices and an edge
        let k = interval();
        let s0e = FormalSimplex::nondegenerate(1, 0).degenerate(0);
        assert_eq!(s0e.word(), &[0]);
        // d_0 s_0 = d_1 s_0 = id
        assert_eq!(k.face_of(&s0e, 0), FormalSimplex::nondegenerate(1, 0));
        assert_eq!(k.face_of(&s0e, 1), FormalSimplex::nondegenerate(1, 0));
        // d_2 s_0 e = s_0 d_1 e = s_0 v0
        assert_eq!(k.face_of(&s0e, 2), FormalSimplex::vertex(0).degenerate(0));
        // iterated identities on a doubly degenerate vertex
        let f = FormalSimplex::degenerate_vertex(1, 2);
        for i in 0..2 {
            for j in (i + 1)..=2 {
                assert_eq!(
                    k.face_of(&k.face_of(&f, j), i),
                    k.face_of(&k.face_of(&f, i), j - 1)
                );
            }
        }
    }

    /// Δ¹ over the trivial group, pointed at vertex 0.
    fn interval() -> SimplicialGSet {
        let vertices = GSet::new(trivial(), vec![vec![0, 1]]).unwrap();
        let ordered = OrderedGComplex::new(
            vertices,
            vec![vec![0], vec![1], vec![0, 1]],
            vec![0, 1],
        )
        .unwrap();
        from_ordered_complex(&ordered, BasepointSpec::Vertex(0)).unwrap()
    }

    #[test]
    fn single_edge_gives_the_interval() {
        let k = interval();
        assert_eq!(k.cells(), &[2, 1]);
        assert_eq!(k.face(1, 0, 0), &FormalSimplex::vertex(1));
        assert_eq!(k.face(1, 0, 1), &FormalSimplex::vertex(0));
    }

    #[test]
    fn rotation_violating_the_order_is_rejected() {
        // rotating the square cycle with rank = vertex id reverses the
        // wrap-around edge
        let g = Arc::new(Group::cyclic(4));
        let action: Vec<Vec<usize>> = (0..4).map(|g| (0..4).map(|v| (v + g) % 4).collect()).collect();
        let vertices = GSet::new(g, action).unwrap();
        let simplices = vec![
            vec![0], vec![1], vec![2], vec![3],
            vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3],
        ];
        let err = OrderedGComplex::new(vertices, simplices, vec![0, 1, 2, 3]).unwrap_err();
        assert!(matches!(err, SimplicialError::OrderNotInvariant(_)));
    }

    #[test]
    fn missing_face_is_rejected() {
        let vertices = GSet::new(trivial(), vec![vec![0, 1]]).unwrap();
        let err = GComplex::new(vertices, vec![vec![0], vec![0, 1]]).unwrap_err();
        assert!(matches!(err, SimplicialError::NotClosedUnderFaces(_)));
    }

    #[test]
    fn tied_rank_on_an_edge_is_rejected() {
        let vertices = GSet::new(trivial(), vec![vec![0, 1]]).unwrap();
        let err = OrderedGComplex::new(
            vertices,
            vec![vec![0], vec![1], vec![0, 1]],
            vec![3, 3],
        )
        .unwrap_err();
        assert!(matches!(err, SimplicialError::OrderNotTotalOnSimplex(_)));
    }

    #[test]
    fn subdividing_a_triangle_boundary_with_rotation() {
        let g = Arc::new(Group::cyclic(3));
        let action: Vec<Vec<usize>> = (0..3).map(|g| (0..3).map(|v| (v + g) % 3).collect()).collect();
        let vertices = GSet::new(g, action).unwrap();
        let simplices = vec![
            vec![0], vec![1], vec![2],
            vec![0, 1], vec![1, 2], vec![0, 2],
        ];
        let complex = GComplex::new(vertices, simplices).unwrap();
        let ordered = barycentric_subdivide(&complex).unwrap();
        // 3 old vertices + 3 barycenters, 6 flag edges
        let verts = ordered.complex().vertices().size();
        let edges = ordered.complex().simplices().iter().filter(|s| s.len() == 2).count();
        assert_eq!((verts, edges), (6, 6));
        let k = from_ordered_complex(&ordered, BasepointSpec::Adjoin).unwrap();
        assert_eq!(k.cells(), &[7, 6]);
    }

    #[test]
    fn subdivision_small_cases() {
        // a point
        let point = GComplex::new(GSet::new(trivial(), vec![vec![0]]).unwrap(), vec![vec![0]]).unwrap();
        let sub = barycentric_subdivide(&point).unwrap();
        assert_eq!(sub.complex().vertices().size(), 1);
        // an edge: 3 vertices, 2 edges
        let edge = GComplex::new(
            GSet::new(trivial(), vec![vec![0, 1]]).unwrap(),
            vec![vec![0], vec![1], vec![0, 1]],
        )
        .unwrap();
        let sub = barycentric_subdivide(&edge).unwrap();
        assert_eq!(sub.complex().vertices().size(), 3);
        assert_eq!(sub.complex().simplices().iter().filter(|s| s.len() == 2).count(), 2);
    }

    #[test]
    fn swapped_edge_pair_subdivides_equivariantly() {
        let g = z2();
        let vertices = GSet::new(g, vec![vec![0, 1, 2, 3], vec![2, 3, 0, 1]]).unwrap();
        let simplices = vec![
            vec![0], vec![1], vec![2], vec![3],
            vec![0, 1], vec![2, 3],
        ];
        let complex = GComplex::new(vertices, simplices).unwrap();
        let ordered = barycentric_subdivide(&complex).unwrap();
        let k = from_ordered_complex(&ordered, BasepointSpec::Adjoin).unwrap();
        assert_eq!(k.cells(), &[7, 4]);
        // all four flag edges lie in free orbits
        for (rep, orbit) in k.orbits(1) {
            assert_eq!(orbit.len(), 2, "edge {rep} should be in a free orbit");
        }
    }

    #[test]
    fn builtin_cell_counts() {
        let k = builtin_space("s0_trivial", &z2()).unwrap();
        assert_eq!(k.cells(), &[2]);
        assert_eq!(k.basepoint(), 1);

        let k = builtin_space("free_orbit_points", &Arc::new(Group::symmetric_3())).unwrap();
        assert_eq!(k.cells(), &[7]);

        let k = builtin_space("circle_rotation", &trivial()).unwrap();
        assert_eq!(k.cells(), &[1, 1]);

        let k = builtin_space("circle_rotation", &Arc::new(Group::cyclic(6))).unwrap();
        assert_eq!(k.cells(), &[1, 6]);

        let k = builtin_space("circle_rotation", &Arc::new(Group::cyclic(3))).unwrap();
        assert_eq!(k.cells(), &[1, 3]);

        let k = builtin_space("circle_antipodal", &z2()).unwrap();
        assert_eq!(k.cells(), &[3, 4]);

        let k = builtin_space("circle_reflection", &z2()).unwrap();
        assert_eq!(k.cells(), &[8, 8]);

        let k = builtin_space("sphere2_antipodal", &z2()).unwrap();
        assert_eq!(k.cells(), &[25, 72, 48]);

        assert!(matches!(
            builtin_space("torus", &z2()),
            Err(SimplicialError::UnknownBuiltin(_))
        ));
        assert!(matches!(
            builtin_space("circle_rotation", &Arc::new(Group::symmetric_3())),
            Err(SimplicialError::UnsupportedGroup { .. })
        ));
        assert!(matches!(
            builtin_space("sphere2_antipodal", &trivial()),
            Err(SimplicialError::UnsupportedGroup { .. })
        ));
    }

    #[test]
    fn fixed_subcomplexes_of_builtins() {
        let g = z2();
        let full = g.full_subgroup();
        let e = g.trivial_subgroup();

        let k = builtin_space("circle_reflection", &g).unwrap();
        let fixed = fixed_subcomplex(&k, &full);
        assert_eq!(fixed.cells(), &[2]);
        let everything = fixed_subcomplex(&k, &e);
        assert_eq!(everything.cells(), k.cells());
        assert_eq!(everything.basepoint(), k.basepoint());

        let k = builtin_space("free_orbit_points", &g).unwrap();
        let fixed = fixed_subcomplex(&k, &full);
        assert_eq!(fixed.cells(), &[1]);

        let k = builtin_space("sphere2_antipodal", &g).unwrap();
        let fixed = fixed_subcomplex(&k, &full);
        assert_eq!(fixed.cells(), &[1]);
        assert!(fixed.is_connected());
    }

    #[test]
    fn fixed_subcomplex_is_monotone() {
        let g = Arc::new(Group::symmetric_3());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let chain = [
            g.trivial_subgroup(),
            g.subgroup_from_elements(&[0, 3, 4]).unwrap(),
            g.full_subgroup(),
        ];
        for _ in 0..5 {
            let k = random_space(&g, &mut rng);
            let counts: Vec<Vec<usize>> = chain
                .iter()
                .map(|h| fixed_subcomplex(&k, h).cells().to_vec())
                .collect();
            for w in counts.windows(2) {
                for q in 0..w[0].len().max(w[1].len()) {
                    let big = w[0].get(q).copied().unwrap_or(0);
                    let small = w[1].get(q).copied().unwrap_or(0);
                    assert!(small <= big);
                }
            }
        }
    }

    #[test]
    fn orbit_quotients_of_builtins() {
        let g = z2();
        let k = builtin_space("circle_antipodal", &g).unwrap();
        let q = orbit_quotient(&k);
        assert_eq!(q.cells(), &[2, 2]);
        assert!(q.is_connected());

        let k = builtin_space("circle_reflection", &g).unwrap();
        let q = orbit_quotient(&k);
        assert_eq!(q.cells(), &[5, 4]);
        assert!(q.is_connected());

        // trivial action: quotient is the identity on cells
        let k = builtin_space("circle_rotation", &trivial()).unwrap();
        let q = orbit_quotient(&k);
        assert_eq!(q.cells(), k.cells());
    }

    #[test]
    fn connectivity_of_builtins() {
        let g = z2();
        assert!(!builtin_space("s0_trivial", &g).unwrap().is_connected());
        assert!(!builtin_space("free_orbit_points", &g).unwrap().is_connected());
        assert!(builtin_space("circle_rotation", &g).unwrap().is_connected());
        assert!(builtin_space("circle_antipodal", &g).unwrap().is_connected());
        assert!(builtin_space("circle_reflection", &g).unwrap().is_connected());
        assert!(builtin_space("sphere2_antipodal", &g).unwrap().is_connected());
    }

    #[test]
    fn wedge_counts_and_inclusions() {
        let g = z2();
        let a = Arc::new(builtin_space("circle_antipodal", &g).unwrap());
        let b = Arc::new(builtin_space("circle_reflection", &g).unwrap());
        let (w, ia, ib) = wedge(&a, &b).unwrap();
        assert_eq!(w.cells(), &[10, 12]);
        assert_eq!(ia.source(), &a);
        assert_eq!(ib.source(), &b);
        assert_eq!(w.basepoint(), a.basepoint());

        // wedge with a point changes nothing
        let point = Arc::new(builtin_space("circle_rotation", &trivial()).unwrap());
        let one = Arc::new(from_gset_plus(&GSet::new(trivial(), vec![vec![]]).unwrap()));
        let (w, _, _) = wedge(&point, &one).unwrap();
        assert_eq!(w.cells(), point.cells());
    }

    #[test]
    fn maps_validate_and_compose() {
        let g = z2();
        let a = Arc::new(builtin_space("circle_antipodal", &g).unwrap());
        let id = SimplicialGMap::identity(&a);
        let idid = SimplicialGMap::compose(&id, &id).unwrap();
        for q in 0..=a.dim() {
            for c in 0..a.cell_count(q) {
                assert_eq!(idid.apply(q, c), &FormalSimplex::nondegenerate(q, c));
            }
        }
        let one = Arc::new(from_gset_plus(&GSet::new(g.clone(), vec![vec![], vec![]]).unwrap()));
        let collapse = SimplicialGMap::collapse(&a, &one);
        // recheck through the validating constructor
        SimplicialGMap::new(a.clone(), one.clone(), collapse.values.clone()).unwrap();
        let back = SimplicialGMap::compose(&collapse, &id).unwrap();
        SimplicialGMap::new(a.clone(), one.clone(), back.values.clone()).unwrap();

        // a non-equivariant assignment is rejected: send the two points of a
        // free orbit to different fixed vertices
        let s = Arc::new(builtin_space("free_orbit_points", &g).unwrap());
        let t = Arc::new(builtin_space("s0_trivial", &g).unwrap());
        let values = vec![vec![
            FormalSimplex::vertex(0),
            FormalSimplex::vertex(t.basepoint()),
            FormalSimplex::vertex(t.basepoint()),
        ]];
        assert!(matches!(
            SimplicialGMap::new(s, t, values),
            Err(SimplicialError::NotEquivariant)
        ));
    }

    #[test]
    fn wedge_inclusions_commute_with_faces_on_samples() {
        let g = z2();
        let a = Arc::new(builtin_space("circle_antipodal", &g).unwrap());
        let b = Arc::new(builtin_space("circle_antipodal", &g).unwrap());
        let (w, ia, ib) = wedge(&a, &b).unwrap();
        for e in 0..a.cell_count(1) {
            let lhs = w.face_of(ia.apply(1, e), 0);
            let rhs = ia.apply_formal(a.face(1, e, 0));
            assert_eq!(lhs, rhs);
        }
        for e in 0..b.cell_count(1) {
            let lhs = w.face_of(ib.apply(1, e), 1);
            let rhs = ib.apply_formal(b.face(1, e, 1));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn interval_contracts_onto_its_basepoint() {
        let k = Arc::new(interval());
        let id = SimplicialGMap::identity(&k);
        let constant = SimplicialGMap::collapse(&k, &k);
        let pieces = vec![
            vec![
                vec![FormalSimplex::vertex(0).degenerate(0)],
                vec![FormalSimplex::nondegenerate(1, 0)],
            ],
            vec![vec![
                FormalSimplex::nondegenerate(1, 0).degenerate(0),
                FormalSimplex::nondegenerate(1, 0).degenerate(0),
            ]],
        ];
        SimplicialHomotopy::new(id.clone(), constant.clone(), pieces).unwrap();

        // a wrong piece is caught
        let broken = vec![
            vec![
                vec![FormalSimplex::vertex(0).degenerate(0)],
                vec![FormalSimplex::vertex(1).degenerate(0)],
            ],
            vec![vec![
                FormalSimplex::nondegenerate(1, 0).degenerate(0),
                FormalSimplex::nondegenerate(1, 0).degenerate(0),
            ]],
        ];
        assert!(matches!(
            SimplicialHomotopy::new(id, constant, broken),
            Err(SimplicialError::HomotopyIdentity(_))
        ));
    }

    /// Two intervals joined at the basepoint and swapped by Z/2.
    fn swapped_intervals() -> SimplicialGSet {
        let g = z2();
        let cells = vec![3, 2];
        let faces = vec![vec![
            vec![FormalSimplex::vertex(1), FormalSimplex::vertex(0)],
            vec![FormalSimplex::vertex(2), FormalSimplex::vertex(0)],
        ]];
        let action = vec![vec![vec![0, 1, 2], vec![0, 2, 1]], vec![vec![0, 1], vec![1, 0]]];
        SimplicialGSet::new(g, cells, faces, action, 0).unwrap()
    }

    #[test]
    fn equivariant_contraction_of_swapped_intervals() {
        let k = Arc::new(swapped_intervals());
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
        SimplicialHomotopy::new(id, constant, pieces).unwrap();
    }

    #[test]
    fn plus_demotes_the_old_basepoint() {
        let g = z2();
        let k = builtin_space("circle_antipodal", &g).unwrap();
        let p = plus(&k);
        assert_eq!(p.cells(), &[4, 4]);
        assert_eq!(p.basepoint(), 3);
        assert!(!p.is_connected());
    }

    #[test]
    fn gsets_become_zero_dimensional_spaces() {
        let empty = GSet::new(trivial(), vec![vec![]]).unwrap();
        let k = from_gset_plus(&empty);
        assert_eq!(k.cells(), &[1]);
        let s3 = Arc::new(Group::symmetric_3());
        let k = from_gset_plus(&GSet::regular(s3));
        assert_eq!(k.cells(), &[7]);
        assert_eq!(k.basepoint(), 6);
    }

    #[test]
    fn spec_round_trip() {
        let g = z2();
        for name in ["circle_antipodal", "circle_reflection", "sphere2_antipodal"] {
            let k = builtin_space(name, &g).unwrap();
            let spec = k.to_spec();
            let json = serde_json::to_string(&spec).unwrap();
            let parsed: SimplicialSpec = serde_json::from_str(&json).unwrap();
            let back = SimplicialGSet::from_spec(g.clone(), &parsed).unwrap();
            assert_eq!(back, k);
        }
    }

    #[test]
    fn random_spaces_validate_and_have_simplicial_quotients() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for g in [trivial(), z2(), Arc::new(Group::symmetric_3())] {
            for _ in 0..6 {
                let k = random_space(&g, &mut rng);
                // already validated by construction; exercise the subobjects
                let q = orbit_quotient(&k);
                assert!(q.cell_count(0) >= 1);
                for h in g.all_subgroups() {
                    let f = fixed_subcomplex(&k, &h);
                    assert!(f.cell_count(0) >= 1);
                }
            }
        }
    }
}
