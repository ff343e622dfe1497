//! Dense exact matrices over a [`Ring`], with Smith and Hermite normal forms.

use crate::ring::{Ring, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A dense matrix with exact entries, interpreted in an ambient [`Ring`]
/// passed to each operation.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_fn(r, c, |i, j| Scalar::from(BigInt::from(rows[i][j])))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    pub fn has_integer_entries(&self) -> bool {
        self.data.iter().all(Scalar::is_integer)
    }

    /// Reduces every entry to its canonical representative in `ring`.
    pub fn normalized(mut self, ring: &Ring) -> Mat {
        for v in &mut self.data {
            *v = ring.normalize(v.clone());
        }
        self
    }

    pub fn add(&self, other: &Mat, ring: &Ring) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Mat::from_fn(self.rows, self.cols, |i, j| ring.add(self.get(i, j), other.get(i, j)))
    }

    pub fn sub(&self, other: &Mat, ring: &Ring) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        Mat::from_fn(self.rows, self.cols, |i, j| ring.sub(self.get(i, j), other.get(i, j)))
    }

    pub fn mul(&self, other: &Mat, ring: &Ring) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = ring.add(out.get(i, j), &(a * b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar, ring: &Ring) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| ring.mul(self.get(i, j), s))
    }

    pub fn neg(&self, ring: &Ring) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| ring.neg(self.get(i, j)))
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[Scalar], ring: &Ring) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                ring.normalize(acc)
            })
            .collect()
    }

    /// Vertical concatenation.
    pub fn stack(mats: &[&Mat]) -> Mat {
        let cols = mats.first().map_or(0, |m| m.cols);
        assert!(mats.iter().all(|m| m.cols == cols), "shape mismatch in stack");
        let rows = mats.iter().map(|m| m.rows).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut r = 0;
        for m in mats {
            for i in 0..m.rows {
                for j in 0..cols {
                    out.set(r + i, j, m.get(i, j).clone());
                }
            }
            r += m.rows;
        }
        out
    }

    /// Writes `block` into `self` with top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Adds `block` into `self` at `(r0, c0)` (used for accumulating
    /// differential contributions that hit the same face orbit twice).
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Mat, ring: &Ring) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                let v = ring.add(self.get(r0 + i, c0 + j), block.get(i, j));
                self.set(r0 + i, c0 + j, v);
            }
        }
    }

    /// Rank of the matrix over the fraction field of `ring` when `ring` is Z
    /// (which equals the rank over Q), or over the field itself.
    pub fn rank(&self, ring: &Ring) -> usize {
        let field = field_of(ring);
        let (_, pivots) = self.clone().normalized(&field).rref(&field);
        pivots.len()
    }

    /// A canonical basis of `{x : Ax = 0}`, returned as matrix columns.
    ///
    /// Over a field the basis comes from the reduced row echelon form. Over Z
    /// the result is a basis of the full integer kernel lattice (computed by
    /// unimodular column reduction) in column Hermite normal form.
    pub fn kernel_basis(&self, ring: &Ring) -> Mat {
        match ring {
            Ring::Integers => self.integer_kernel_basis(),
            _ => self.field_kernel_basis(ring),
        }
    }

    /// Solves `A X = B` exactly. Returns `None` when the system is
    /// inconsistent, or (over Z) when the solution is not integral. Free
    /// variables, if any, are set to zero.
    pub fn solve(&self, b: &Mat, ring: &Ring) -> Option<Mat> {
        assert_eq!(self.rows, b.rows, "shape mismatch in solve");
        let field = field_of(ring);
        let aug = {
            let mut m = Mat::zeros(self.rows, self.cols + b.cols);
            m.set_block(0, 0, self);
            m.set_block(0, self.cols, b);
            m.normalized(&field)
        };
        let aug_cols = aug.cols;
        let (r, pivots) = aug.rref(&field);
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        // rows beyond the pivot rows must be zero on the B side too
        for i in pivots.len()..self.rows {
            for j in self.cols..aug_cols {
                if !r.get(i, j).is_zero() {
                    return None;
                }
            }
        }
        let mut x = Mat::zeros(self.cols, b.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, r.get(row, self.cols + j).clone());
            }
        }
        if *ring == Ring::Integers && !x.has_integer_entries() {
            return None;
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let va = self.get(a, j).clone();
            let vb = self.get(b, j).clone();
            self.set(a, j, vb);
            self.set(b, j, va);
        }
    }

    /// Reduced row echelon form over a field; returns (rref, pivot columns).
    fn rref(mut self, field: &Ring) -> (Mat, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(p) = (row..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = field.inv(self.get(row, col)).expect("nonzero field element");
            for j in col..self.cols {
                let v = field.mul(self.get(row, j), &inv);
                self.set(row, j, v);
            }
            for i in 0..self.rows {
                if i != row && !self.get(i, col).is_zero() {
                    let f = self.get(i, col).clone();
                    for j in col..self.cols {
                        let v = field.sub(self.get(i, j), &field.mul(self.get(row, j), &f));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        (self, pivots)
    }

    fn field_kernel_basis(&self, field: &Ring) -> Mat {
        let (r, pivots) = self.clone().normalized(field).rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Mat::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, Scalar::one());
            for (row, &p) in pivots.iter().enumerate() {
                basis.set(p, k, field.neg(r.get(row, fc)));
            }
        }
        basis
    }

    fn integer_kernel_basis(&self) -> Mat {
        assert!(self.has_integer_entries(), "integer kernel of a non-integer matrix");
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_integer()).collect())
            .collect();
        let n = self.cols;
        let mut u: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let mut active: Vec<usize> = (0..n).collect();
        for row in 0..self.rows {
            loop {
                let nonzero: Vec<usize> = active
                    .iter()
                    .copied()
                    .filter(|&c| !a[row][c].is_zero())
                    .collect();
                if nonzero.len() <= 1 {
                    if let Some(&pivot) = nonzero.first() {
                        active.retain(|&c| c != pivot);
                    }
                    break;
                }
                let &small = nonzero
                    .iter()
                    .min_by_key(|&&c| a[row][c].abs())
                    .expect("nonempty");
                for &c in &nonzero {
                    if c == small {
                        continue;
                    }
                    let q = &a[row][c] / &a[row][small];
                    if !q.is_zero() {
                        for r in 0..self.rows {
                            let s = &a[r][small] * &q;
                            a[r][c] -= s;
                        }
                        for r in 0..n {
                            let s = &u[r][small] * &q;
                            u[r][c] -= s;
                        }
                    }
                }
            }
        }
        let kernel_cols: Vec<usize> = active
            .into_iter()
            .filter(|&c| (0..self.rows).all(|r| a[r][c].is_zero()))
            .collect();
        let raw = Mat::from_fn(n, kernel_cols.len(), |i, j| {
            Scalar::from(u[i][kernel_cols[j]].clone())
        });
        column_hermite(&raw)
    }
}

/// Field used for elimination: Q stands in for Z (same ranks), fields are
/// themselves.
fn field_of(ring: &Ring) -> Ring {
    match ring {
        Ring::Integers => Ring::Rationals,
        r => *r,
    }
}

/// Canonicalizes the column lattice spanned by `m` (integer entries) into
/// column Hermite normal form: pivots positive, entries right of each pivot
/// zero, entries left of each pivot reduced into `[0, pivot)`.
fn column_hermite(m: &Mat) -> Mat {
    let rows = m.rows();
    let mut cols: Vec<Vec<BigInt>> = (0..m.cols())
        .map(|j| (0..rows).map(|i| m.get(i, j).to_integer()).collect())
        .collect();
    let mut next = 0usize;
    for row in 0..rows {
        loop {
            let nonzero: Vec<usize> = (next..cols.len()).filter(|&c| !cols[c][row].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let c = nonzero[0];
                cols.swap(next, c);
                if cols[next][row].is_negative() {
                    for v in &mut cols[next] {
                        *v = -v.clone();
                    }
                }
                // reduce earlier columns against this pivot
                let pivot = cols[next][row].clone();
                for c in 0..next {
                    let q = cols[c][row].div_floor(&pivot);
                    if !q.is_zero() {
                        for i in 0..rows {
                            let s = &cols[next][i] * &q;
                            cols[c][i] -= s;
                        }
                    }
                }
                next += 1;
                break;
            }
            let small = nonzero
                .iter()
                .copied()
                .min_by_key(|&c| cols[c][row].abs())
                .expect("nonempty");
            for &c in &nonzero {
                if c == small {
                    continue;
                }
                let q = &cols[c][row] / &cols[small][row];
                if !q.is_zero() {
                    for i in 0..rows {
                        let s = &cols[small][i] * &q;
                        cols[c][i] -= s;
                    }
                }
            }
        }
        if next == cols.len() {
            break;
        }
    }
    Mat::from_fn(rows, cols.len(), |i, j| Scalar::from(cols[j][i].clone()))
}

/// The Smith normal form invariants of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
    /// Nonzero diagonal invariants d₁ | d₂ | …, all positive.
    pub invariants: Vec<BigInt>,
    /// Number of nonzero invariants.
    pub rank: usize,
}

/// Diagonalizes an integer matrix by unimodular row/column operations and
/// returns the invariant factors. Exact at any size (arbitrary precision).
pub fn smith_normal_form(m: &Mat) -> SmithNormalForm {
    assert!(m.has_integer_entries(), "Smith normal form of a non-integer matrix");
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..cols).map(|j| m.get(i, j).to_integer()).collect())
        .collect();
    let bound = rows.min(cols);
    let mut t = 0;
    while t < bound {
        // move a minimal nonzero entry of the trailing submatrix to (t, t)
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
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
        let mut clean = false;
        while !clean {
            clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                for j in t..cols {
                    let s = &a[t][j] * &q;
                    a[i][j] -= s;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                for row in a.iter_mut().skip(t) {
                    let s = &row[t] * &q;
                    row[j] -= s;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    clean = false;
                }
            }
            if clean {
                // divisibility fix-up: pivot must divide the rest
                'scan: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&a[i][j] % &a[t][t]).is_zero() {
                            for jj in t..cols {
                                let s = a[i][jj].clone();
                                a[t][jj] += s;
                            }
                            clean = false;
                            break 'scan;
                        }
                    }
                }
            }
        }
        t += 1;
    }
    let mut diag: Vec<BigInt> = (0..t).map(|i| a[i][i].abs()).collect();
    // enforce the divisibility chain (gcd/lcm sweep)
    let k = diag.len();
    for i in 0..k {
        for j in i + 1..k {
            if !(&diag[j] % &diag[i]).is_zero() {
                let g = diag[i].gcd(&diag[j]);
                let l = &diag[i] / &g * &diag[j];
                diag[i] = g;
                diag[j] = l;
            }
        }
    }
    let invariants: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_zero()).collect();
    let rank = invariants.len();
    SmithNormalForm { invariants, rank }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
