//! Exact integer linear algebra over ℤ.
//!
//! Everything downstream (bar homology, K_Γ, H₂, orbit invariants) reduces to
//! arithmetic with sublattices of ℤⁿ, so this module provides the complete
//! toolkit in exact arbitrary-precision arithmetic — there is no floating
//! point anywhere:
//!
//! - [`IntMatrix`]: dense matrices over [`Int`] (= `BigInt`).
//! - [`smith_normal_form`]: U·M·V = D with U, V unimodular and the diagonal
//!   in a divisibility chain.
//! - [`HnfBuilder`] / [`row_hnf`]: incremental row Hermite normal form, the
//!   workhorse for compressing large generator streams (the boundary image of
//!   the bar complex has |G|³ generators; inserting them one by one keeps at
//!   most `cols` rows alive at any time).
//! - [`QuotientPresentation`]: a finitely generated abelian group ℤⁿ/L with
//!   invariant factors and a cached canonical-representative `reduce` map
//!   (mixed-radix reduction in Smith coordinates, mapped back to the ambient
//!   basis through the cached unimodular transforms).
//! - [`kernel`] and [`preimage_lattice`]: exact kernels and preimages of
//!   integer maps, needed for H₂ (kernel of ∂₂) and H_{2,Γ} (∂₂-preimage of
//!   the conjugation lattice L_Γ).
//!
//! Conventions: a lattice in ℤⁿ is described by a matrix whose *rows*
//! generate it; a homomorphism ℤⁿ → ℤᵐ is an m×n matrix acting on column
//! vectors (`mul_vec`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Exact integer scalar used throughout the engine.
pub type Int = BigInt;

/// Errors from lattice-level operations.
#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("{context}: expected dimension {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
}

/// Dense matrix over ℤ with exact entries, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    /// All-zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    /// n×n identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    /// Build from explicit rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Int>>) -> Result<Self, LatticeError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(LatticeError::DimensionMismatch {
                    context: "IntMatrix::from_rows",
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(IntMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let converted = rows
            .iter()
            .map(|r| r.iter().map(|&x| Int::from(x)).collect())
            .collect();
        IntMatrix::from_rows(cols, converted).expect("row length mismatch")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Int) {
        self.data[i * self.cols + j] = value;
    }

    /// Borrow row `i` as a slice.
    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Matrix product; panics on shape mismatch (programmer error).
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Apply to a column vector: `A·x`.
    pub fn mul_vec(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, x.len(), "mul_vec shape mismatch");
        let mut out = vec![Int::zero(); self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = Int::zero();
            for (a, b) in row.iter().zip(x) {
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            out[i] = acc;
        }
        out
    }

    /// Row-vector product `x·A` (used for basis changes on row lattices).
    pub fn vec_mul(x: &[Int], a: &IntMatrix) -> Vec<Int> {
        assert_eq!(a.rows, x.len(), "vec_mul shape mismatch");
        let mut out = vec![Int::zero(); a.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let row = a.row(i);
            for j in 0..a.cols {
                if !row[j].is_zero() {
                    out[j] += xi * &row[j];
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m: Vec<Vec<Int>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return Int::zero();
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev; // exact by Bareiss
                }
                m[i][k] = Int::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }
}

/// Result of [`smith_normal_form`]: `u·m·v = d` with `u`, `v` unimodular and
/// `d` diagonal satisfying d₁ | d₂ | … (trailing zeros allowed).
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithNormalForm {
    /// Diagonal entries (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<Int> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

struct SnfWork {
    m: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
    vinv: Option<IntMatrix>,
}

impl SnfWork {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.m.cols {
            self.m.data.swap(a * self.m.cols + j, b * self.m.cols + j);
        }
        if let Some(u) = &mut self.u {
            for j in 0..u.cols {
                u.data.swap(a * u.cols + j, b * u.cols + j);
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.m.cols {
            let idx = r * self.m.cols + j;
            let value = -std::mem::take(&mut self.m.data[idx]);
            self.m.data[idx] = value;
        }
        if let Some(u) = &mut self.u {
            for j in 0..u.cols {
                let idx = r * u.cols + j;
                let value = -std::mem::take(&mut u.data[idx]);
                u.data[idx] = value;
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, src: usize, dst: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.m.cols {
            let s = self.m.get(src, j).clone();
            if !s.is_zero() {
                self.m.data[dst * self.m.cols + j] += c * s;
            }
        }
        if let Some(u) = &mut self.u {
            for j in 0..u.cols {
                let s = u.get(src, j).clone();
                if !s.is_zero() {
                    u.data[dst * u.cols + j] += c * s;
                }
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.m.rows {
            self.m.data.swap(i * self.m.cols + a, i * self.m.cols + b);
        }
        if let Some(v) = &mut self.v {
            for i in 0..v.rows {
                v.data.swap(i * v.cols + a, i * v.cols + b);
            }
        }
        if let Some(vinv) = &mut self.vinv {
            for j in 0..vinv.cols {
                vinv.data.swap(a * vinv.cols + j, b * vinv.cols + j);
            }
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.m.rows {
            let idx = i * self.m.cols + c;
            let value = -std::mem::take(&mut self.m.data[idx]);
            self.m.data[idx] = value;
        }
        if let Some(v) = &mut self.v {
            for i in 0..v.rows {
                let idx = i * v.cols + c;
                let value = -std::mem::take(&mut v.data[idx]);
                v.data[idx] = value;
            }
        }
        if let Some(vinv) = &mut self.vinv {
            for j in 0..vinv.cols {
                let idx = c * vinv.cols + j;
                let value = -std::mem::take(&mut vinv.data[idx]);
                vinv.data[idx] = value;
            }
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, src: usize, dst: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.m.rows {
            let s = self.m.get(i, src).clone();
            if !s.is_zero() {
                self.m.data[i * self.m.cols + dst] += c * s;
            }
        }
        if let Some(v) = &mut self.v {
            for i in 0..v.rows {
                let s = v.get(i, src).clone();
                if !s.is_zero() {
                    v.data[i * v.cols + dst] += c * s;
                }
            }
        }
        // V' = V·E with E = I + c·e_{src,dst} implies V'⁻¹ = E⁻¹·V⁻¹,
        // i.e. row[src] -= c * row[dst] on the inverse.
        if let Some(vinv) = &mut self.vinv {
            for j in 0..vinv.cols {
                let s = vinv.get(dst, j).clone();
                if !s.is_zero() {
                    vinv.data[src * vinv.cols + j] -= c * s;
                }
            }
        }
    }

    /// Deterministic pivot: minimal |entry| over the submatrix with top-left
    /// corner (t, t); ties broken by row-major position.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut best_abs = Int::zero();
        for i in t..self.m.rows {
            for j in t..self.m.cols {
                let x = self.m.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let a = x.abs();
                if best.is_none() || a < best_abs {
                    best = Some((i, j));
                    best_abs = a;
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let steps = self.m.rows.min(self.m.cols);
        let mut t = 0;
        while t < steps {
            let Some((pi, pj)) = self.find_pivot(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            if self.m.get(t, t).is_negative() {
                self.negate_row(t);
            }
            // Clear column t, then row t; a swap during the row phase can
            // re-dirty the column, so iterate until both are clean. The
            // pivot's absolute value strictly decreases on every re-entry,
            // so this terminates.
            loop {
                let mut col_dirty = false;
                for i in t + 1..self.m.rows {
                    if self.m.get(i, t).is_zero() {
                        continue;
                    }
                    let q = self.m.get(i, t) / self.m.get(t, t);
                    self.add_row(t, i, &(-q));
                    if !self.m.get(i, t).is_zero() {
                        // Remainder smaller than the pivot: promote it.
                        self.swap_rows(t, i);
                        if self.m.get(t, t).is_negative() {
                            self.negate_row(t);
                        }
                        col_dirty = true;
                    }
                }
                if col_dirty {
                    continue;
                }
                let mut row_dirty = false;
                for j in t + 1..self.m.cols {
                    if self.m.get(t, j).is_zero() {
                        continue;
                    }
                    let q = self.m.get(t, j) / self.m.get(t, t);
                    self.add_col(t, j, &(-q));
                    if !self.m.get(t, j).is_zero() {
                        self.swap_cols(t, j);
                        if self.m.get(t, t).is_negative() {
                            self.negate_col(t);
                        }
                        row_dirty = true;
                    }
                }
                if !row_dirty {
                    break;
                }
            }
            // Divisibility pass: the pivot must divide every remaining entry.
            let mut fixed = true;
            'scan: for i in t + 1..self.m.rows {
                for j in t + 1..self.m.cols {
                    if !(self.m.get(i, j) % self.m.get(t, t)).is_zero() {
                        self.add_row(i, t, &Int::one());
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                t += 1;
            }
        }
    }
}

fn snf_with(m: &IntMatrix, want_u: bool, want_v: bool, want_vinv: bool) -> SnfWork {
    let mut work = SnfWork {
        m: m.clone(),
        u: want_u.then(|| IntMatrix::identity(m.rows())),
        v: want_v.then(|| IntMatrix::identity(m.cols())),
        vinv: want_vinv.then(|| IntMatrix::identity(m.cols())),
    };
    work.run();
    work
}

/// Smith normal form: returns (U, D, V) with `U·M·V = D`, U and V unimodular,
/// and D diagonal with d₁ | d₂ | …. Empty matrices are allowed.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let work = snf_with(m, true, true, false);
    SmithNormalForm {
        u: work.u.expect("U requested"),
        d: work.m,
        v: work.v.expect("V requested"),
    }
}

/// Incremental row Hermite normal form over ℤ.
///
/// Maintains at most one row per pivot column; rows may be inserted in any
/// order and the generated lattice is preserved at every step. This is the
/// interface through which very large generator streams (e.g. the |G|³
/// boundary columns of the bar complex) are compressed without ever holding
/// a dense matrix of that size.
#[derive(Clone)]
pub struct HnfBuilder {
    cols: usize,
    rows: BTreeMap<usize, Vec<Int>>,
}

impl HnfBuilder {
    pub fn new(cols: usize) -> Self {
        HnfBuilder {
            cols,
            rows: BTreeMap::new(),
        }
    }

    pub fn from_matrix(m: &IntMatrix) -> Self {
        let mut b = HnfBuilder::new(m.cols());
        for i in 0..m.rows() {
            b.insert(m.row(i).to_vec());
        }
        b
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of independent rows inserted so far (the lattice rank).
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn leading(row: &[Int]) -> Option<usize> {
        row.iter().position(|x| !x.is_zero())
    }

    /// Insert a generator row, reducing it against the current basis.
    pub fn insert(&mut self, mut row: Vec<Int>) {
        assert_eq!(row.len(), self.cols, "HnfBuilder::insert length mismatch");
        loop {
            let Some(j) = Self::leading(&row) else {
                return;
            };
            match self.rows.get_mut(&j) {
                None => {
                    if row[j].is_negative() {
                        for x in row.iter_mut() {
                            let value = -std::mem::take(x);
                            *x = value;
                        }
                    }
                    self.rows.insert(j, row);
                    return;
                }
                Some(basis) => {
                    let (bj, rj) = (basis[j].clone(), row[j].clone());
                    if (&rj % &bj).is_zero() {
                        let q = rj / &bj;
                        for (r, b) in row.iter_mut().zip(basis.iter()) {
                            *r -= &q * b;
                        }
                    } else {
                        // Replace the basis row by the gcd combination and
                        // continue reducing the complementary remainder.
                        let ext = bj.extended_gcd(&rj);
                        let g = ext.gcd;
                        let (s, t) = (ext.x, ext.y);
                        let (q1, q2) = (&bj / &g, &rj / &g);
                        let mut new_basis = vec![Int::zero(); self.cols];
                        let mut new_row = vec![Int::zero(); self.cols];
                        for k in 0..self.cols {
                            new_basis[k] = &s * &basis[k] + &t * &row[k];
                            new_row[k] = &q1 * &row[k] - &q2 * &basis[k];
                        }
                        debug_assert!(new_basis[j] == g && new_row[j].is_zero());
                        *basis = new_basis;
                        row = new_row;
                    }
                }
            }
        }
    }

    /// Insert a sparse generator row given as (column, coefficient) pairs.
    pub fn insert_sparse(&mut self, entries: &[(usize, i64)]) {
        let mut row = vec![Int::zero(); self.cols];
        for &(j, c) in entries {
            row[j] += Int::from(c);
        }
        self.insert(row);
    }

    /// Exact membership test: does `v` lie in the generated lattice?
    pub fn contains(&self, v: &[Int]) -> bool {
        assert_eq!(v.len(), self.cols, "HnfBuilder::contains length mismatch");
        let mut w = v.to_vec();
        loop {
            let Some(j) = Self::leading(&w) else {
                return true;
            };
            let Some(basis) = self.rows.get(&j) else {
                return false;
            };
            if !(&w[j] % &basis[j]).is_zero() {
                return false;
            }
            let q = &w[j] / &basis[j];
            for (x, b) in w.iter_mut().zip(basis.iter()) {
                *x -= &q * b;
            }
        }
    }

    /// Fully normalize (entries above each pivot reduced into [0, pivot)) and
    /// return the basis matrix, rows ordered by pivot column.
    pub fn into_matrix(mut self) -> IntMatrix {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        for (idx, &j) in pivots.iter().enumerate() {
            let pivot_row = self.rows[&j].clone();
            for &jj in &pivots[..idx] {
                let upper = self.rows.get_mut(&jj).expect("pivot row");
                if upper[j].is_zero() {
                    continue;
                }
                let q = upper[j].div_floor(&pivot_row[j]);
                if q.is_zero() {
                    continue;
                }
                for (x, b) in upper.iter_mut().zip(pivot_row.iter()) {
                    *x -= &q * b;
                }
            }
        }
        let rows: Vec<Vec<Int>> = self.rows.into_values().collect();
        IntMatrix::from_rows(self.cols, rows).expect("consistent widths")
    }
}

/// Row Hermite normal form of the lattice generated by the rows of `m`
/// (zero rows dropped, pivots positive, entries above pivots reduced).
pub fn row_hnf(m: &IntMatrix) -> IntMatrix {
    HnfBuilder::from_matrix(m).into_matrix()
}

/// HNF basis of the sum of two row lattices in the same ambient space.
pub fn lattice_sum(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols(), b.cols(), "lattice_sum ambient mismatch");
    let mut builder = HnfBuilder::from_matrix(a);
    for i in 0..b.rows() {
        builder.insert(b.row(i).to_vec());
    }
    builder.into_matrix()
}

/// Rows generating the kernel lattice {x ∈ ℤⁿ : A·x = 0} of an m×n map.
/// The returned basis is saturated (it generates the full kernel, not a
/// finite-index sublattice) because it consists of columns of a unimodular V.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let work = snf_with(a, false, true, false);
    let v = work.v.expect("V requested");
    let steps = work.m.rows().min(work.m.cols());
    let rank = (0..steps).filter(|&i| !work.m.get(i, i).is_zero()).count();
    let mut rows = Vec::new();
    for j in rank..a.cols() {
        rows.push((0..a.cols()).map(|i| v.get(i, j).clone()).collect());
    }
    let basis = IntMatrix::from_rows(a.cols(), rows).expect("consistent widths");
    row_hnf(&basis)
}

/// Preimage lattice {x ∈ ℤⁿ : A·x ∈ L} of a row lattice L ⊆ ℤᵐ under an
/// m×n map A. Computed as the projection to the first n coordinates of the
/// kernel of [A | −Lᵀ].
pub fn preimage_lattice(a: &IntMatrix, l: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    if l.cols() != a.rows() {
        return Err(LatticeError::DimensionMismatch {
            context: "preimage_lattice: lattice ambient vs map codomain",
            expected: a.rows(),
            got: l.cols(),
        });
    }
    let n = a.cols();
    let k = l.rows();
    let mut combined = IntMatrix::zeros(a.rows(), n + k);
    for i in 0..a.rows() {
        for j in 0..n {
            combined.set(i, j, a.get(i, j).clone());
        }
        for r in 0..k {
            combined.set(i, n + r, -l.get(r, i).clone());
        }
    }
    let ker = kernel(&combined);
    let mut rows = Vec::new();
    for i in 0..ker.rows() {
        rows.push(ker.row(i)[..n].to_vec());
    }
    let proj = IntMatrix::from_rows(n, rows).expect("consistent widths");
    Ok(row_hnf(&proj))
}

/// Express `target` as an integer combination of the rows of an HNF basis
/// (as produced by [`HnfBuilder::into_matrix`]). Returns the coordinate
/// vector, or `None` when `target` is not in the generated lattice.
pub fn solve_in_basis(basis: &IntMatrix, target: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(basis.cols(), target.len(), "solve_in_basis length mismatch");
    let mut w = target.to_vec();
    let mut coords = vec![Int::zero(); basis.rows()];
    for i in 0..basis.rows() {
        let row = basis.row(i);
        let j = row.iter().position(|x| !x.is_zero())?;
        if w[j].is_zero() {
            continue;
        }
        if !(&w[j] % &row[j]).is_zero() {
            return None;
        }
        let q = &w[j] / &row[j];
        for (x, b) in w.iter_mut().zip(row.iter()) {
            *x -= &q * b;
        }
        coords[i] = q;
    }
    if w.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}

/// A finitely generated abelian group presented as ℤⁿ/L together with a
/// cached canonical-representative map.
///
/// The Smith transform `V`, its inverse, and the extended diagonal are cached
/// at construction; `reduce` converts to Smith coordinates (one row-vector
/// product), takes each coordinate modulo its diagonal entry, and maps back.
pub struct QuotientPresentation {
    ambient_rank: usize,
    /// HNF basis of the relation lattice (for fast membership tests).
    basis: IntMatrix,
    v: IntMatrix,
    vinv: IntMatrix,
    /// Diagonal extended to length `ambient_rank`: positive entries are
    /// finite directions, zeros are free directions.
    diag: Vec<Int>,
    invariant_factors: Vec<Int>,
    free_rank: usize,
}

impl QuotientPresentation {
    /// Present ℤ^ambient_rank modulo the lattice generated by the rows of
    /// `relation_gens`.
    pub fn new(ambient_rank: usize, relation_gens: &IntMatrix) -> Result<Self, LatticeError> {
        if relation_gens.cols() != ambient_rank && relation_gens.rows() > 0 {
            return Err(LatticeError::DimensionMismatch {
                context: "QuotientPresentation: relation generators",
                expected: ambient_rank,
                got: relation_gens.cols(),
            });
        }
        let basis = if relation_gens.rows() == 0 {
            IntMatrix::zeros(0, ambient_rank)
        } else {
            row_hnf(relation_gens)
        };
        Ok(Self::from_hnf_basis(ambient_rank, basis))
    }

    /// Fast path when the caller already holds an HNF basis of the relation
    /// lattice (e.g. a shared boundary lattice plus a handful of extra
    /// relators).
    pub fn from_hnf_basis(ambient_rank: usize, basis: IntMatrix) -> Self {
        assert!(
            basis.rows() == 0 || basis.cols() == ambient_rank,
            "from_hnf_basis ambient mismatch"
        );
        let work = snf_with(&basis, false, true, true);
        let v = work.v.expect("V requested");
        let vinv = work.vinv.expect("Vinv requested");
        let steps = work.m.rows().min(work.m.cols());
        let mut diag = vec![Int::zero(); ambient_rank];
        for i in 0..steps {
            diag[i] = work.m.get(i, i).clone();
        }
        let invariant_factors: Vec<Int> = diag
            .iter()
            .filter(|d| **d > Int::one())
            .cloned()
            .collect();
        let free_rank = diag.iter().filter(|d| d.is_zero()).count();
        QuotientPresentation {
            ambient_rank,
            basis,
            v,
            vinv,
            diag,
            invariant_factors,
            free_rank,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// Invariant factors > 1 in a divisibility chain (torsion part).
    pub fn invariant_factors(&self) -> &[Int] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Order of the torsion subgroup (product of the invariant factors).
    pub fn torsion_order(&self) -> Int {
        self.invariant_factors
            .iter()
            .fold(Int::one(), |acc, d| acc * d)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    /// HNF basis of the relation lattice.
    pub fn relation_basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Exact membership in the relation lattice (cheaper than `reduce`).
    pub fn lattice_contains(&self, v: &[Int]) -> bool {
        assert_eq!(v.len(), self.ambient_rank, "lattice_contains length");
        let mut w = v.to_vec();
        for i in 0..self.basis.rows() {
            let row = self.basis.row(i);
            let j = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("HNF basis has no zero rows");
            if w[j].is_zero() {
                continue;
            }
            if !(&w[j] % &row[j]).is_zero() {
                return false;
            }
            let q = &w[j] / &row[j];
            for (x, b) in w.iter_mut().zip(row.iter()) {
                *x -= &q * b;
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    fn smith_coords(&self, v: &[Int]) -> Vec<Int> {
        let mut y = IntMatrix::vec_mul(v, &self.v);
        for (yi, d) in y.iter_mut().zip(&self.diag) {
            if d.is_positive() {
                *yi = yi.mod_floor(d);
            }
        }
        y
    }

    /// Canonical ambient representative of `v + L`.
    pub fn reduce_vec(&self, v: &[Int]) -> Result<Vec<Int>, LatticeError> {
        if v.len() != self.ambient_rank {
            return Err(LatticeError::DimensionMismatch {
                context: "QuotientPresentation::reduce",
                expected: self.ambient_rank,
                got: v.len(),
            });
        }
        let y = self.smith_coords(v);
        Ok(IntMatrix::vec_mul(&y, &self.vinv))
    }

    /// Canonical class of a vector.
    pub fn reduce(&self, v: &[Int]) -> Result<AbelianClass, LatticeError> {
        Ok(AbelianClass {
            coords: self.reduce_vec(v)?,
        })
    }

    /// Compact canonical coordinates: the Smith coordinates at positions with
    /// diagonal ≠ 1 — first torsion positions in invariant-factor order, then
    /// free positions. Two vectors are congruent mod L iff these agree. This
    /// avoids the ambient back-substitution when only a comparison key is
    /// needed.
    pub fn canonical_coords(&self, v: &[Int]) -> Vec<Int> {
        let y = self.smith_coords(v);
        let mut out = Vec::with_capacity(self.invariant_factors.len() + self.free_rank);
        for (yi, d) in y.iter().zip(&self.diag) {
            if *d > Int::one() {
                out.push(yi.clone());
            }
        }
        for (yi, d) in y.iter().zip(&self.diag) {
            if d.is_zero() {
                out.push(yi.clone());
            }
        }
        out
    }

    pub fn zero_class(&self) -> AbelianClass {
        AbelianClass {
            coords: vec![Int::zero(); self.ambient_rank],
        }
    }

    pub fn add(&self, a: &AbelianClass, b: &AbelianClass) -> AbelianClass {
        let sum: Vec<Int> = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x + y)
            .collect();
        self.reduce(&sum).expect("class lengths agree")
    }

    pub fn neg(&self, a: &AbelianClass) -> AbelianClass {
        let neg: Vec<Int> = a.coords.iter().map(|x| -x).collect();
        self.reduce(&neg).expect("class lengths agree")
    }
}

/// An element of a [`QuotientPresentation`]: the canonical ambient
/// representative of its coset. Only classes produced by the same
/// presentation are meaningfully comparable; equality is coordinate equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AbelianClass {
    coords: Vec<Int>,
}

impl AbelianClass {
    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_vec(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn snf_identity_and_zero() {
        let one = IntMatrix::from_i64_rows(1, &[vec![1]]);
        let snf = smith_normal_form(&one);
        assert_eq!(snf.diagonal(), int_vec(&[1]));

        let zero = IntMatrix::zeros(2, 3);
        let snf = smith_normal_form(&zero);
        assert!(snf.d.is_zero());
        assert_eq!(snf.u.mul(&zero).mul(&snf.v), snf.d);
    }

    #[test]
    fn snf_reference_example() {
        let m = IntMatrix::from_i64_rows(2, &[vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), int_vec(&[2, 4]));
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert_eq!(snf.u.determinant().abs(), Int::one());
        assert_eq!(snf.v.determinant().abs(), Int::one());
    }

    #[test]
    fn hnf_membership_roundtrip() {
        let gens = IntMatrix::from_i64_rows(3, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let builder = HnfBuilder::from_matrix(&gens);
        for i in 0..gens.rows() {
            assert!(builder.contains(gens.row(i)));
        }
        assert!(!builder.contains(&int_vec(&[1, 0, 0])));
    }

    #[test]
    fn quotient_reduce_properties() {
        let gens = IntMatrix::from_i64_rows(2, &[vec![2, 0], vec![0, 2]]);
        let pres = QuotientPresentation::new(2, &gens).unwrap();
        assert_eq!(pres.invariant_factors(), &[Int::from(2), Int::from(2)]);
        assert_eq!(pres.free_rank(), 0);
        let v = int_vec(&[3, 5]);
        let r = pres.reduce_vec(&v).unwrap();
        assert_eq!(pres.reduce_vec(&r).unwrap(), r);
        let shifted = int_vec(&[5, 5]);
        assert_eq!(pres.reduce_vec(&shifted).unwrap(), r);
    }

    #[test]
    fn kernel_solves_map() {
        let a = IntMatrix::from_i64_rows(3, &[vec![1, 2, 3], vec![2, 4, 6]]);
        let ker = kernel(&a);
        assert_eq!(ker.rows(), 2);
        for i in 0..ker.rows() {
            assert!(a.mul_vec(ker.row(i)).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_in_basis_roundtrip() {
        let gens = IntMatrix::from_i64_rows(3, &[vec![2, 1, 0], vec![0, 3, 1]]);
        let basis = row_hnf(&gens);
        let target = int_vec(&[4, 5, 1]); // 2*(2,1,0) + 1*(0,3,1)
        let coords = solve_in_basis(&basis, &target).unwrap();
        let mut recon = vec![Int::zero(); 3];
        for (c, i) in coords.iter().zip(0..basis.rows()) {
            for (r, b) in recon.iter_mut().zip(basis.row(i)) {
                *r += c * b;
            }
        }
        assert_eq!(recon, target);
        assert!(solve_in_basis(&basis, &int_vec(&[1, 0, 0])).is_none());
    }
}
