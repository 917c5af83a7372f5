//! Exact arbitrary-precision integer matrix algebra.
//!
//! Dense matrices over `BigInt` with Hermite and Smith normal forms. The
//! Smith decomposition always carries unimodular witnesses `P`, `Q` with
//! `P * M * Q = D`; everything downstream (cokernels, kernels, ranks) is
//! read off the decomposition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

use crate::fgab::FgAbGroup;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("entry index ({0},{1}) out of bounds for {2}x{3} matrix")]
    OutOfBounds(usize, usize, usize, usize),
}

/// Dense integer matrix. `0 x n` and `n x 0` shapes are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// The matrix with entry `(i, j) = 1` iff `i == selected_cols[j]`.
    ///
    /// Realizes the rectangular identity obtained from `identity(rows)` by
    /// keeping only the selected columns.
    pub fn identity_embedding(rows: usize, selected_cols: &[usize]) -> Self {
        let mut m = Self::zero(rows, selected_cols.len());
        for (j, &i) in selected_cols.iter().enumerate() {
            assert!(i < rows, "selected column index out of range");
            m[(i, j)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn from_i64_rows(data: &[&[i64]]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        Self::from_fn(rows, cols, |i, j| BigInt::from(data[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &other[(k, j)]).sum()
        }))
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            &self[(i, j)] - &other[(i, j)]
        }))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Kept deliberately separate from the normal-form code so it can serve
    /// as an independent check on the unimodularity of SNF witnesses.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[idx(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[idx(i, k)].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(idx(k, j), idx(i, j));
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[idx(i, j)] * &a[idx(k, k)] - &a[idx(i, k)] * &a[idx(k, j)];
                    a[idx(i, j)] = &num / &prev;
                }
                a[idx(i, k)] = BigInt::zero();
            }
            prev = a[idx(k, k)].clone();
        }
        let d = a[idx(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Serialize to arrays-of-arrays of decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect())
            .collect();
        serde_json::json!({ "rows": self.rows, "cols": self.cols, "entries": rows })
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Smith normal form with unimodular witnesses: `P * M * Q = D`.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub d: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
    /// Diagonal entries `d_1 | d_2 | ... | d_k`, all positive. Unit factors
    /// are retained here; callers drop them when forming group torsion.
    pub invariant_factors: Vec<BigInt>,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

struct SnfCalc {
    d: IntMatrix,
    p: IntMatrix,
    q: IntMatrix,
}

impl SnfCalc {
    fn new(m: IntMatrix) -> Self {
        let p = IntMatrix::identity(m.rows());
        let q = IntMatrix::identity(m.cols());
        SnfCalc { d: m, p, q }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.d.cols() {
            let tmp = self.d[(a, j)].clone();
            self.d[(a, j)] = self.d[(b, j)].clone();
            self.d[(b, j)] = tmp;
        }
        for j in 0..self.p.cols() {
            let tmp = self.p[(a, j)].clone();
            self.p[(a, j)] = self.p[(b, j)].clone();
            self.p[(b, j)] = tmp;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.d.rows() {
            let tmp = self.d[(i, a)].clone();
            self.d[(i, a)] = self.d[(i, b)].clone();
            self.d[(i, b)] = tmp;
        }
        for i in 0..self.q.rows() {
            let tmp = self.q[(i, a)].clone();
            self.q[(i, a)] = self.q[(i, b)].clone();
            self.q[(i, b)] = tmp;
        }
    }

    /// row a -= c * row b
    fn row_sub(&mut self, a: usize, b: usize, c: &BigInt) {
        for j in 0..self.d.cols() {
            let v = &self.d[(a, j)] - c * &self.d[(b, j)];
            self.d[(a, j)] = v;
        }
        for j in 0..self.p.cols() {
            let v = &self.p[(a, j)] - c * &self.p[(b, j)];
            self.p[(a, j)] = v;
        }
    }

    /// col a -= c * col b
    fn col_sub(&mut self, a: usize, b: usize, c: &BigInt) {
        for i in 0..self.d.rows() {
            let v = &self.d[(i, a)] - c * &self.d[(i, b)];
            self.d[(i, a)] = v;
        }
        for i in 0..self.q.rows() {
            let v = &self.q[(i, a)] - c * &self.q[(i, b)];
            self.q[(i, a)] = v;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.d.cols() {
            let v = -self.d[(a, j)].clone();
            self.d[(a, j)] = v;
        }
        for j in 0..self.p.cols() {
            let v = -self.p[(a, j)].clone();
            self.p[(a, j)] = v;
        }
    }

    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                if self.d[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some(b) => {
                        if self.d[(i, j)].abs() < self.d[b].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }

    fn process(&mut self) {
        let n = self.d.rows().min(self.d.cols());
        for t in 0..n {
            loop {
                let Some((pi, pj)) = self.pivot(t) else {
                    return self.finish(t);
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let mut dirty = false;
                for i in t + 1..self.d.rows() {
                    if self.d[(i, t)].is_zero() {
                        continue;
                    }
                    let c = div_round(&self.d[(i, t)], &self.d[(t, t)]);
                    self.row_sub(i, t, &c);
                    if !self.d[(i, t)].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.d.cols() {
                    if self.d[(t, j)].is_zero() {
                        continue;
                    }
                    let c = div_round(&self.d[(t, j)], &self.d[(t, t)]);
                    self.col_sub(j, t, &c);
                    if !self.d[(t, j)].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                // Row and column t are clear. Pull in any entry the pivot
                // does not divide, so the final diagonal forms a chain.
                let piv = self.d[(t, t)].clone();
                let offender = (t + 1..self.d.rows()).find(|&i| {
                    (t + 1..self.d.cols()).any(|j| !self.d[(i, j)].mod_floor(&piv).is_zero())
                });
                match offender {
                    Some(i) => {
                        self.row_sub(t, i, &BigInt::from(-1));
                    }
                    None => break,
                }
            }
            if self.d[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
        self.finish(n);
    }

    fn finish(&mut self, upto: usize) {
        for t in 0..upto {
            if self.d[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Round-to-nearest quotient; keeps remainders small during elimination.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Smith normal form by gcd elimination with minimal-|entry| pivoting.
pub fn snf(m: &IntMatrix) -> SnfDecomposition {
    let mut calc = SnfCalc::new(m.clone());
    calc.process();
    let n = calc.d.rows().min(calc.d.cols());
    let invariant_factors: Vec<BigInt> = (0..n)
        .map(|t| calc.d[(t, t)].clone())
        .take_while(|d| !d.is_zero())
        .collect();
    debug_assert!(invariant_factors
        .windows(2)
        .all(|w| w[1].mod_floor(&w[0]).is_zero()));
    SnfDecomposition {
        d: calc.d,
        p: calc.p,
        q: calc.q,
        invariant_factors,
    }
}

pub fn rank(m: &IntMatrix) -> usize {
    snf(m).rank()
}

/// Columns form a Z-basis of `ker(m : Z^cols -> Z^rows)`.
///
/// With `P m Q = D`, the columns of `Q` past the rank satisfy
/// `m q_j = P^{-1} D e_j = 0`, and they span the kernel because `Q` is
/// unimodular.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = snf(m);
    let k = s.rank();
    IntMatrix::from_fn(m.cols(), m.cols() - k, |i, j| s.q[(i, k + j)].clone())
}

/// Canonical form of `Z^rows / im(m)`.
pub fn cokernel(m: &IntMatrix) -> FgAbGroup {
    let s = snf(m);
    let free_rank = m.rows() - s.rank();
    let torsion: Vec<BigInt> = s
        .invariant_factors
        .iter()
        .filter(|d| **d > BigInt::one())
        .cloned()
        .collect();
    FgAbGroup::new(free_rank, torsion)
}

/// Invariant factors by a route independent of [`snf`]: alternate Hermite
/// row and column reductions until the matrix is diagonal, then repair the
/// divisibility chain with plain gcd/lcm arithmetic on the diagonal.
pub fn invariant_factors_via_hnf(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    loop {
        hermite_rows(&mut a);
        if is_diagonal(&a) {
            break;
        }
        a = a.transpose();
        hermite_rows(&mut a);
        a = a.transpose();
        if is_diagonal(&a) {
            break;
        }
    }
    let mut diag: Vec<BigInt> = (0..a.rows().min(a.cols()))
        .map(|i| a[(i, i)].abs())
        .filter(|d| !d.is_zero())
        .collect();
    // gcd/lcm bubble pass until the chain stabilizes
    loop {
        let mut changed = false;
        for i in 0..diag.len() {
            for j in i + 1..diag.len() {
                if !diag[j].mod_floor(&diag[i]).is_zero() {
                    let g = diag[i].gcd(&diag[j]);
                    let l = diag[i].lcm(&diag[j]);
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

/// Cokernel computed through the Hermite pipeline; oracle counterpart of
/// [`cokernel`].
pub fn cokernel_via_hnf(m: &IntMatrix) -> FgAbGroup {
    let factors = invariant_factors_via_hnf(m);
    let free_rank = m.rows() - factors.len();
    FgAbGroup::new(
        free_rank,
        factors.into_iter().filter(|d| *d > BigInt::one()).collect(),
    )
}

fn is_diagonal(a: &IntMatrix) -> bool {
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if i != j && !a[(i, j)].is_zero() {
                return false;
            }
        }
    }
    true
}

/// In-place row-style Hermite reduction (row echelon over Z, no column ops).
fn hermite_rows(a: &mut IntMatrix) {
    let rows = a.rows();
    let cols = a.cols();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (pivot_row..rows)
                .filter(|&i| !a[(i, col)].is_zero())
                .collect();
            if nonzero.is_empty() {
                break;
            }
            // smallest nonzero entry in the column becomes the pivot
            let best = *nonzero
                .iter()
                .min_by_key(|&&i| a[(i, col)].abs())
                .unwrap();
            if best != pivot_row {
                for j in 0..cols {
                    let tmp = a[(pivot_row, j)].clone();
                    a[(pivot_row, j)] = a[(best, j)].clone();
                    a[(best, j)] = tmp;
                }
            }
            let mut done = true;
            for i in pivot_row + 1..rows {
                if a[(i, col)].is_zero() {
                    continue;
                }
                let c = div_round(&a[(i, col)], &a[(pivot_row, col)]);
                for j in 0..cols {
                    let v = &a[(i, j)] - &c * &a[(pivot_row, j)];
                    a[(i, j)] = v;
                }
                if !a[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !a[(pivot_row, col)].is_zero() {
            pivot_row += 1;
        }
    }
}
