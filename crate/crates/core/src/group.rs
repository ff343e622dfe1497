//! Finite groups as validated Cayley tables, with subgroups, cosets, and
//! conjugation.
//!
//! Elements are indices `0..|G|` and element 0 is the identity. The order cap
//! (default 64) can be overridden with the `BREDON_MAX_GROUP_ORDER`
//! environment variable.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

pub const DEFAULT_MAX_ORDER: usize = 64;

/// The current group-order cap: `BREDON_MAX_GROUP_ORDER` when set, else
/// [`DEFAULT_MAX_ORDER`].
pub fn max_order() -> usize {
    std::env::var("BREDON_MAX_GROUP_ORDER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_ORDER)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is not square: row {row} has length {len}, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("group order {order} exceeds the cap {cap} (set BREDON_MAX_GROUP_ORDER to raise)")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("entry at ({row}, {col}) is {value}, out of range for order {order}")]
    OutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("element 0 is not a two-sided identity (fails at element {witness})")]
    NoIdentity { witness: usize },
    #[error("associativity fails at ({a}·{b})·{c} ≠ {a}·({b}·{c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("elements do not form a subgroup: {a}·{b} = {product} is missing")]
    NotClosed { a: usize, b: usize, product: usize },
}

/// A finite group presented by its Cayley table. Immutable once validated.
#[derive(Clone, PartialEq, Eq)]
pub struct Group {
    order: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
}

/// A subgroup, stored as its sorted element set. All operations live on
/// [`Group`] and take the subgroup by reference.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }
}

/// JSON form: `{"order": n, "table": [[...]]}`.
#[derive(Serialize, Deserialize)]
pub struct GroupSpec {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl Group {
    /// Validates a Cayley table: square, in-range, element 0 a two-sided
    /// identity, associative, every element invertible.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<Group, GroupError> {
        let order = table.len();
        let cap = max_order();
        if order == 0 || order > cap {
            return Err(GroupError::OrderCapExceeded { order, cap });
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::NotSquare { row, len: r.len(), order });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::OutOfRange { row, col, value, order });
                }
            }
        }
        for g in 0..order {
            if table[0][g] != g || table[g][0] != g {
                return Err(GroupError::NoIdentity { witness: g });
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NonAssociative { a, b, c });
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; order];
        for g in 0..order {
            match (0..order).find(|&h| table[g][h] == 0 && table[h][g] == 0) {
                Some(h) => inv[g] = h,
                None => return Err(GroupError::NoInverse { element: g }),
            }
        }
        let flat = table.iter().flatten().copied().collect();
        Ok(Group { order, table: flat, inv })
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Group, GroupError> {
        if spec.table.len() != spec.order {
            return Err(GroupError::NotSquare { row: 0, len: spec.table.len(), order: spec.order });
        }
        Group::from_cayley_table(&spec.table)
    }

    pub fn to_spec(&self) -> GroupSpec {
        GroupSpec {
            order: self.order,
            table: (0..self.order)
                .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    /// The trivial group.
    pub fn trivial() -> Group {
        Group::from_cayley_table(&[vec![0]]).expect("valid")
    }

    /// The cyclic group Z/n.
    pub fn cyclic(n: usize) -> Group {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Group::from_cayley_table(&table).expect("valid")
    }

    /// The symmetric group on three letters, elements ordered by one-line
    /// notation: 012, 021, 102, 120, 201, 210.
    pub fn symmetric_3() -> Group {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index =
            |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("permutation of 3");
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        Group::from_cayley_table(&table).expect("valid")
    }

    /// The Klein four-group Z/2 × Z/2 (bitwise xor on 0..4).
    pub fn klein_four() -> Group {
        let table: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        Group::from_cayley_table(&table).expect("valid")
    }

    /// The dihedral group of order 2n; element i + n·j is rᶦsʲ with
    /// s·r·s = r⁻¹.
    pub fn dihedral(n: usize) -> Group {
        assert!(n >= 1);
        let idx = |i: usize, j: usize| i % n + n * (j % 2);
        let table: Vec<Vec<usize>> = (0..2 * n)
            .map(|x| {
                let (i1, j1) = (x % n, x / n);
                (0..2 * n)
                    .map(|y| {
                        let (i2, j2) = (y % n, y / n);
                        let i = if j1 == 0 { i1 + i2 } else { i1 + n - i2 };
                        idx(i % n, j1 + j2)
                    })
                    .collect()
            })
            .collect();
        Group::from_cayley_table(&table).expect("valid")
    }

    /// The order of a single element.
    pub fn element_order(&self, g: usize) -> usize {
        let mut n = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    /// A generator of minimal index, when the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order).find(|&g| self.element_order(g) == self.order)
    }

    /// The full subgroup G ≤ G.
    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup { elements: (0..self.order).collect() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![0] }
    }

    /// Validates that a set of elements is closed (hence a subgroup).
    pub fn subgroup_from_elements(&self, elements: &[usize]) -> Result<Subgroup, GroupError> {
        let mut sorted: Vec<usize> = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.binary_search(&0).is_err() {
            return Err(GroupError::NotClosed { a: 0, b: 0, product: 0 });
        }
        for &a in &sorted {
            for &b in &sorted {
                let p = self.mul(a, b);
                if sorted.binary_search(&p).is_err() {
                    return Err(GroupError::NotClosed { a, b, product: p });
                }
            }
        }
        Ok(Subgroup { elements: sorted })
    }

    /// The subgroup generated by a set of elements.
    pub fn subgroup_generated(&self, generators: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = generators.iter().copied().collect();
        set.insert(0);
        loop {
            let mut next = set.clone();
            for &a in &set {
                next.insert(self.inv(a));
                for &b in &set {
                    next.insert(self.mul(a, b));
                }
            }
            if next.len() == set.len() {
                break;
            }
            set = next;
        }
        Subgroup { elements: set.into_iter().collect() }
    }

    /// Every subgroup, duplicate-free, sorted by (size, elements). Found by
    /// closing each known subgroup against each outside element; every
    /// subgroup arises by adjoining its elements one at a time, so the walk
    /// is complete.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = vec![self.trivial_subgroup()];
        found.insert(queue[0].elements.clone());
        while let Some(h) = queue.pop() {
            for g in 1..self.order {
                if h.contains(g) {
                    continue;
                }
                let mut gens = h.elements.clone();
                gens.push(g);
                let closed = self.subgroup_generated(&gens);
                if found.insert(closed.elements.clone()) {
                    queue.push(closed);
                }
            }
        }
        let mut out: Vec<Subgroup> = found.into_iter().map(|elements| Subgroup { elements }).collect();
        out.sort_by_key(|h| (h.len(), h.elements.clone()));
        out
    }

    /// gHg⁻¹.
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        let gi = self.inv(g);
        let mut elements: Vec<usize> =
            h.elements.iter().map(|&x| self.mul(self.mul(g, x), gi)).collect();
        elements.sort_unstable();
        Subgroup { elements }
    }

    /// Left cosets aH, as (minimal-index representative, sorted coset),
    /// ordered by representative.
    pub fn left_cosets(&self, h: &Subgroup) -> Vec<(usize, Vec<usize>)> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for a in 0..self.order {
            if seen[a] {
                continue;
            }
            let mut coset: Vec<usize> = h.elements.iter().map(|&x| self.mul(a, x)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            out.push((a, coset));
        }
        out
    }

    /// The coset aH of a given element, sorted.
    pub fn coset_of(&self, a: usize, h: &Subgroup) -> Vec<usize> {
        let mut coset: Vec<usize> = h.elements.iter().map(|&x| self.mul(a, x)).collect();
        coset.sort_unstable();
        coset
    }

    /// [G : H].
    pub fn index_of(&self, h: &Subgroup) -> usize {
        self.order / h.len()
    }
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Group(order {})", self.order)
    }
}
