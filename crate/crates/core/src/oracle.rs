//! An independent cross-check: ordinary (nonequivariant) reduced simplicial
//! homology over Z, computed straight from the stored cell data with its own
//! big-integer elimination. It deliberately shares no arithmetic with the
//! matrix module or the equivariant pipeline — agreement between the two
//! paths is evidence, not tautology.
//!
//! The action of the space is ignored; pass an orbit quotient or a fixed
//! subcomplex to check those instead.

use crate::homology::HomologyResult;
use crate::simplicial::SimplicialGSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer boundary matrices of the reduced normalized chain complex: the
/// degree-0 group drops the basepoint, degenerate faces and faces at the
/// basepoint contribute nothing.
fn boundary_matrices(k: &SimplicialGSet) -> Vec<Vec<Vec<BigInt>>> {
    let bp = k.basepoint();
    let vertex_row = |cell: usize| cell - usize::from(cell > bp);
    let count = |q: usize| {
        let n = k.cell_count(q);
        if q == 0 { n - 1 } else { n }
    };
    (1..=k.dim())
        .map(|q| {
            let mut mat = vec![vec![BigInt::zero(); count(q)]; count(q - 1)];
            for c in 0..k.cell_count(q) {
                for i in 0..=q {
                    let f = k.face(q, c, i);
                    if f.is_degenerate() {
                        continue;
                    }
                    if f.base_dim() == 0 && f.base_cell() == bp {
                        continue;
                    }
                    let row = if q == 1 { vertex_row(f.base_cell()) } else { f.base_cell() };
                    if i % 2 == 0 {
                        mat[row][c] += 1;
                    } else {
                        mat[row][c] -= 1;
                    }
                }
            }
            mat
        })
        .collect()
}

/// Diagonalizes an integer matrix in place by row and column operations and
/// returns the nonzero diagonal entries (positive, in no particular order).
fn diagonalize(a: &mut Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut out = Vec::new();
    let mut t = 0;
    'outer: while t < rows.min(cols) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj): (usize, usize)| {
                        a[i][j].abs() < a[pi][pj].abs()
                    })
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        // euclidean reduction of the pivot column, then the pivot row; a
        // nonzero remainder is strictly smaller than the pivot, so restarting
        // the pivot search terminates
        for i in t + 1..rows {
            if !a[i][t].is_zero() {
                let q = &a[i][t] / &a[t][t];
                let pivot_row: Vec<BigInt> = a[t][t..].to_vec();
                for (j, p) in pivot_row.iter().enumerate() {
                    let v = p * &q;
                    a[i][t + j] -= v;
                }
                if !a[i][t].is_zero() {
                    continue 'outer;
                }
            }
        }
        for j in t + 1..cols {
            if !a[t][j].is_zero() {
                let q = &a[t][j] / &a[t][t];
                for i in t..rows {
                    let v = &a[i][t] * &q;
                    a[i][j] -= v;
                }
                if !a[t][j].is_zero() {
                    continue 'outer;
                }
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

/// Turns a multiset of nonzero diagonal entries into invariant factors
/// d₁ | d₂ | … by repeated gcd/lcm exchanges.
fn invariant_factors(mut diag: Vec<BigInt>) -> Vec<BigInt> {
    loop {
        let mut changed = false;
        for i in 0..diag.len() {
            for j in i + 1..diag.len() {
                let g = diag[i].gcd(&diag[j]);
                if g != diag[i] {
                    let l = (&diag[i] * &diag[j]) / &g;
                    diag[i] = g;
                    diag[j] = l;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    diag.sort();
    diag
}

/// Ordinary reduced integral homology of the underlying space, one
/// `(betti, torsion)` pair per degree.
pub fn reduced_integral_homology(k: &SimplicialGSet) -> Vec<(usize, Vec<BigInt>)> {
    let mut boundaries = boundary_matrices(k);
    let diagonals: Vec<Vec<BigInt>> = boundaries.iter_mut().map(diagonalize).collect();
    let rank = |q: usize| -> usize {
        if q == 0 || q > k.dim() {
            0
        } else {
            diagonals[q - 1].len()
        }
    };
    let count = |q: usize| {
        let n = k.cell_count(q);
        if q == 0 { n - 1 } else { n }
    };
    (0..=k.dim())
        .map(|q| {
            let betti = count(q) - rank(q) - rank(q + 1);
            let torsion = if q < k.dim() {
                invariant_factors(diagonals[q].clone())
                    .into_iter()
                    .filter(|d| !d.is_one())
                    .collect()
            } else {
                Vec::new()
            };
            (betti, torsion)
        })
        .collect()
}

/// Whether an equivariant result agrees degreewise with an oracle answer,
/// treating degrees beyond either list as trivial.
pub fn agrees(result: &HomologyResult, ordinary: &[(usize, Vec<BigInt>)]) -> bool {
    let len = result.groups().len().max(ordinary.len());
    (0..len).all(|q| {
        let g = result.group(q);
        let (betti, torsion) = ordinary
            .get(q)
            .map(|(b, t)| (*b, t.clone()))
            .unwrap_or((0, Vec::new()));
        g.betti == betti && g.torsion == torsion
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{constant_system, linearization_system};
    use crate::group::Group;
    use crate::homology::reduced_homology;
    use crate::orbit::OrbitCategory;
    use crate::ring::Ring;
    use crate::simplicial::{builtin_space, orbit_quotient};
    use std::sync::Arc;

    fn big(values: &[i64]) -> Vec<BigInt> {
        values.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn invariant_factors_form_a_divisibility_chain() {
        assert_eq!(invariant_factors(big(&[4, 6])), big(&[2, 12]));
        assert_eq!(invariant_factors(big(&[2, 3])), big(&[1, 6]));
        assert_eq!(invariant_factors(big(&[8, 4, 2])), big(&[2, 4, 8]));
        assert_eq!(invariant_factors(big(&[6, 10, 15])), big(&[1, 30, 30]));
    }

    #[test]
    fn underlying_spaces_of_builtins() {
        let g = Arc::new(Group::cyclic(2));
        // collapsed square: a wedge of two circles
        let k = builtin_space("circle_antipodal", &g).unwrap();
        let h = reduced_integral_homology(&k);
        assert_eq!(h, vec![(0, vec![]), (2, vec![])]);
        // octagon: a circle
        let k = builtin_space("circle_reflection", &g).unwrap();
        let h = reduced_integral_homology(&k);
        assert_eq!(h, vec![(0, vec![]), (1, vec![])]);
        // subdivided octahedron with two barycenters merged: S² wedge S¹
        let k = builtin_space("sphere2_antipodal", &g).unwrap();
        let h = reduced_integral_homology(&k);
        assert_eq!(h, vec![(0, vec![]), (1, vec![]), (1, vec![])]);
        // its orbit space: a projective plane
        let q = orbit_quotient(&k);
        let h = reduced_integral_homology(&q);
        assert_eq!(h, vec![(0, vec![]), (0, big(&[2])), (0, vec![])]);
    }

    #[test]
    fn oracle_agrees_with_the_equivariant_pipeline() {
        for name in [
            "s0_trivial",
            "free_orbit_points",
            "circle_rotation",
            "circle_antipodal",
            "circle_reflection",
            "sphere2_antipodal",
        ] {
            let g = Arc::new(Group::cyclic(2));
            let orbit = Arc::new(OrbitCategory::new(g.clone()));
            let k = builtin_space(name, &g).unwrap();
            let constant = Arc::new(constant_system(orbit.clone(), Ring::Integers));
            let h = reduced_homology(&k, &constant).unwrap();
            assert!(
                agrees(&h, &reduced_integral_homology(&orbit_quotient(&k))),
                "constant coefficients disagree on {name}"
            );
            let lin = Arc::new(linearization_system(orbit, Ring::Integers));
            let h = reduced_homology(&k, &lin).unwrap();
            assert!(
                agrees(&h, &reduced_integral_homology(&k)),
                "linearization disagrees on {name}"
            );
        }
    }
}
