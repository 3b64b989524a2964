//! Dense complex linear algebra used by every construction in the crate.
//!
//! [`CMat`] is a plain row-major complex matrix. Singular values and
//! eigenvalues are delegated to `nalgebra`; everything else (products,
//! residual norms, the sparse intertwiner solver) is implemented here.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Absolute / relative tolerances for numerical rank and comparisons.
///
/// Singular values at or below `abs_tol + rel_tol * sigma_max` count as zero.
/// The default has `abs_tol = 0`, so rank decisions are scale invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol >= 0.0 && rel_tol >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerances must be non-negative (abs {abs_tol}, rel {rel_tol})"
            )));
        }
        Ok(Self { abs_tol, rel_tol })
    }

    /// Threshold below which a value of magnitude relative to `scale` is zero.
    pub fn cutoff(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale
    }
}

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "CMat must be at least 1x1");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = f(r, c);
            }
        }
        m
    }

    /// Builds a matrix from row-major data; fails on length mismatch or non-finite entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn column(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), 1, |i, _| v[i])
    }

    pub fn diag(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn outer(x: &[Complex64], y: &[Complex64]) -> Self {
        Self::from_fn(x.len(), y.len(), |i, j| x[i] * y[j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col_vec(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|z| **z != ZERO).count()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// Max-abs distance to another matrix of the same shape.
    pub fn dist(&self, other: &CMat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `sum_{ij} self[i,j] * other[i,j]` (no conjugation).
    pub fn dot_entries(&self, other: &CMat) -> Complex64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Places `blocks` (row-major grid of equally sized blocks) into one matrix.
    pub fn block(blocks: &[&[&CMat]]) -> Self {
        let br = blocks[0][0].rows;
        let bc = blocks[0][0].cols;
        let mut m = Self::zeros(br * blocks.len(), bc * blocks[0].len());
        for (bi, brow) in blocks.iter().enumerate() {
            for (bj, b) in brow.iter().enumerate() {
                assert_eq!((b.rows, b.cols), (br, bc), "ragged block layout");
                for r in 0..br {
                    for c in 0..bc {
                        m[(bi * br + r, bj * bc + c)] = b[(r, c)];
                    }
                }
            }
        }
        m
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Inverse via LU; fails for singular input.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "inverse of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        self.to_nalgebra()
            .try_inverse()
            .map(|m| Self::from_nalgebra(&m))
            .ok_or_else(|| Error::Numerical("matrix is singular".into()))
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale(-ONE)
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        matmul(self, rhs).expect("matrix product shape mismatch")
    }
}

/// Matrix product. Zero entries of `a` are skipped, so products of the
/// monomial connecting operators cost O(N^2) rather than O(N^3).
pub fn matmul(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.cols != b.rows {
        return Err(Error::Shape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = CMat::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        let orow = &mut out.data[i * b.cols..(i + 1) * b.cols];
        for k in 0..a.cols {
            let aik = a.data[i * a.cols + k];
            if aik == ZERO {
                continue;
            }
            let brow = &b.data[k * b.cols..(k + 1) * b.cols];
            for (o, &bkj) in orow.iter_mut().zip(brow) {
                *o += aik * bkj;
            }
        }
    }
    Ok(out)
}

/// Singular values and the full right-singular basis (rows of `V^H`).
fn svd_right(a: &CMat) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let n = a.cols;
    let rows = a.rows.max(n);
    if a.is_real() {
        let mut m = DMatrix::<f64>::zeros(rows, n);
        for r in 0..a.rows {
            for c in 0..n {
                m[(r, c)] = a[(r, c)].re;
            }
        }
        let svd = m.svd(false, true);
        let vt = svd
            .v_t
            .ok_or_else(|| Error::Numerical("SVD did not return V^T".into()))?;
        let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        let basis = (0..vt.nrows())
            .map(|i| (0..n).map(|j| Complex64::new(vt[(i, j)], 0.0)).collect())
            .collect();
        Ok((sv, basis))
    } else {
        let mut m = DMatrix::<Complex64>::zeros(rows, n);
        for r in 0..a.rows {
            for c in 0..n {
                m[(r, c)] = a[(r, c)];
            }
        }
        let svd = m.svd(false, true);
        let vt = svd
            .v_t
            .ok_or_else(|| Error::Numerical("SVD did not return V^H".into()))?;
        let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        // rows of V^H are conjugated right-singular vectors
        let basis = (0..vt.nrows())
            .map(|i| (0..n).map(|j| vt[(i, j)].conj()).collect())
            .collect();
        Ok((sv, basis))
    }
}

/// Singular values in non-increasing order.
pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    let (mut sv, _) = svd_right(a)?;
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// Numerical rank: singular values above `tol.cutoff(sigma_max)`.
pub fn rank(a: &CMat, tol: Tolerance) -> Result<usize> {
    let sv = singular_values(a)?;
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax <= f64::MIN_POSITIVE {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol.cutoff(smax)).count())
}

/// Orthonormal basis of the numerical null space of `a`, as column vectors.
pub fn null_space(a: &CMat, tol: Tolerance) -> Result<Vec<CMat>> {
    Ok(null_vectors(a, tol)?
        .into_iter()
        .map(|v| CMat::column(&v))
        .collect())
}

pub(crate) fn null_vectors(a: &CMat, tol: Tolerance) -> Result<Vec<Vec<Complex64>>> {
    let (sv, basis) = svd_right(a)?;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax <= f64::MIN_POSITIVE {
        return Ok((0..a.cols)
            .map(|j| {
                let mut v = vec![ZERO; a.cols];
                v[j] = ONE;
                v
            })
            .collect());
    }
    Ok(sv
        .iter()
        .zip(basis)
        .filter(|(s, _)| **s <= tol.cutoff(smax))
        .map(|(_, v)| v)
        .collect())
}

/// Least-squares solution of `a x = b` via SVD, returning `(x, max |a x - b|)`.
pub fn least_squares(a: &CMat, b: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    if a.rows != b.len() {
        return Err(Error::Shape(format!(
            "rhs of length {} for {} rows",
            b.len(),
            a.rows
        )));
    }
    let m = a.to_nalgebra();
    let svd = m.svd(true, true);
    let rhs = DVector::from_column_slice(b);
    let x = svd
        .solve(&rhs, 1e-13)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    let x: Vec<Complex64> = x.iter().copied().collect();
    let resid = a
        .mul_vec(&x)
        .iter()
        .zip(b)
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max);
    Ok((x, resid))
}

/// Eigenvalues (with multiplicity) of a square matrix, via complex Schur.
pub fn eigenvalues(a: &CMat) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "eigenvalues of a {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let schur = nalgebra::linalg::Schur::try_new(a.to_nalgebra(), 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("Schur form is not triangular".into()))?;
    Ok(ev.iter().copied().collect())
}

/// Eigenvalues with unit eigenvectors. Each vector is the right-singular
/// vector of `a - lambda I` for its smallest singular value.
pub fn eigenpairs(a: &CMat) -> Result<Vec<(Complex64, Vec<Complex64>)>> {
    let n = a.rows;
    eigenvalues(a)?
        .into_iter()
        .map(|lambda| {
            let shifted = CMat::from_fn(n, n, |i, j| {
                if i == j {
                    a[(i, j)] - lambda
                } else {
                    a[(i, j)]
                }
            });
            let (sv, basis) = svd_right(&shifted)?;
            let k = sv
                .iter()
                .enumerate()
                .min_by(|x, y| x.1.total_cmp(y.1))
                .map(|(k, _)| k)
                .unwrap_or(0);
            Ok((lambda, basis[k].clone()))
        })
        .collect()
}

/// Sparse linear system stored row-wise, used for the large intertwiner
/// problems whose rows touch only a couple of unknowns.
#[derive(Debug, Clone)]
pub struct SparseSystem {
    cols: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseSystem {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Appends a row; repeated columns are summed and exact zeros dropped.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, Complex64)>) {
        let mut row: Vec<(usize, Complex64)> = Vec::new();
        for (c, v) in entries {
            assert!(c < self.cols, "column {c} out of range");
            match row.iter_mut().find(|(rc, _)| *rc == c) {
                Some((_, acc)) => *acc += v,
                None => row.push((c, v)),
            }
        }
        row.retain(|(_, v)| *v != ZERO);
        if !row.is_empty() {
            self.rows.push(row);
        }
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|(c, v)| v * x[*c]).sum())
            .collect()
    }

    fn dense(&self, rows: &[usize], cols: &[usize]) -> CMat {
        let mut pos = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            pos[c] = k;
        }
        let mut m = CMat::zeros(rows.len().max(1), cols.len());
        for (r, &ri) in rows.iter().enumerate() {
            for &(c, v) in &self.rows[ri] {
                m[(r, pos[c])] = v;
            }
        }
        m
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Null space of a sparse system.
///
/// The unknowns are split into connected components of the row/column
/// incidence graph, which block-diagonalises the system by a permutation.
/// Components whose rows have at most two entries are eliminated along a
/// spanning tree (each row fixes one unknown relative to another) and then
/// every row is checked for consistency; such a component contributes
/// exactly one null vector when consistent and none otherwise. Remaining
/// components fall back to the dense SVD route of [`null_space`].
pub fn sparse_null_space(sys: &SparseSystem, tol: Tolerance) -> Result<Vec<Vec<Complex64>>> {
    let n = sys.cols;
    let mut parent: Vec<usize> = (0..n).collect();
    for row in &sys.rows {
        let r0 = find(&mut parent, row[0].0);
        for &(c, _) in &row[1..] {
            let rc = find(&mut parent, c);
            if rc != r0 {
                parent[rc] = r0;
            }
        }
    }
    let mut comp_cols: Vec<Vec<usize>> = Vec::new();
    let mut comp_of_root = vec![usize::MAX; n];
    let mut comp_of = vec![0usize; n];
    for c in 0..n {
        let r = find(&mut parent, c);
        if comp_of_root[r] == usize::MAX {
            comp_of_root[r] = comp_cols.len();
            comp_cols.push(Vec::new());
        }
        comp_of[c] = comp_of_root[r];
        comp_cols[comp_of_root[r]].push(c);
    }
    let mut comp_rows: Vec<Vec<usize>> = vec![Vec::new(); comp_cols.len()];
    for (ri, row) in sys.rows.iter().enumerate() {
        comp_rows[comp_of[row[0].0]].push(ri);
    }
    let mut rows_of_col: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ri, row) in sys.rows.iter().enumerate() {
        for &(c, _) in row {
            rows_of_col[c].push(ri);
        }
    }

    let mut out = Vec::new();
    for (cols, rows) in comp_cols.iter().zip(&comp_rows) {
        if rows.is_empty() {
            for &c in cols {
                let mut v = vec![ZERO; n];
                v[c] = ONE;
                out.push(v);
            }
            continue;
        }
        if rows.iter().all(|&r| sys.rows[r].len() <= 2) {
            if let Some(v) = propagate(sys, cols, rows, &rows_of_col, tol) {
                out.push(v);
            }
        } else {
            let local = sys.dense(rows, cols);
            for lv in null_vectors(&local, tol)? {
                let mut v = vec![ZERO; n];
                for (k, &c) in cols.iter().enumerate() {
                    v[c] = lv[k];
                }
                out.push(v);
            }
        }
    }
    Ok(out)
}

fn propagate(
    sys: &SparseSystem,
    cols: &[usize],
    rows: &[usize],
    rows_of_col: &[Vec<usize>],
    tol: Tolerance,
) -> Option<Vec<Complex64>> {
    let n = sys.cols;
    let mut x: Vec<Option<Complex64>> = vec![None; n];
    let root = cols[0];
    x[root] = Some(ONE);
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        let xu = x[u].expect("visited");
        for &ri in &rows_of_col[u] {
            let row = &sys.rows[ri];
            if row.len() == 1 {
                return None;
            }
            let (a, (v, b)) = if row[0].0 == u {
                (row[0].1, row[1])
            } else {
                (row[1].1, row[0])
            };
            if x[v].is_none() {
                x[v] = Some(-a * xu / b);
                stack.push(v);
            }
        }
    }
    for &ri in rows {
        let row = &sys.rows[ri];
        let mut s = ZERO;
        let mut scale = 0.0;
        for &(c, v) in row {
            let xc = x[c].unwrap_or(ZERO);
            s += v * xc;
            scale += v.norm() * xc.norm();
        }
        if s.norm() > tol.cutoff(scale.max(f64::MIN_POSITIVE)) {
            return None;
        }
    }
    let mut v: Vec<Complex64> = x.into_iter().map(|z| z.unwrap_or(ZERO)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    Some(v)
}
