//! Dense matrices over a [`Scalar`] field.
//!
//! Exact fields use Gauss–Jordan elimination; the numeric
//! field overrides rank, kernel and image with a singular-value cutoff at
//! `eps · σ_max`.

use std::fmt;

use nalgebra::DMatrix;
use serde_json::Value;

use crate::error::{AlgebraError, Result};
use crate::scalar::{Scalar, C64};

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{:?}", self[(r, c)])).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form together with the pivot columns.
pub struct Rref<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::Shape { degree: 0, detail: "ragged rows".into() });
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| F::from_i64(rows[i][j]))
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, cols: &[Vec<F>]) -> Self {
        Self::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row(&self, r: usize) -> Vec<F> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(AlgebraError::Shape {
                degree: 0,
                detail: format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_exact_zero() {
                        continue;
                    }
                    out[(i, j)] += a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    /// Panics on shape mismatch; use [`Matrix::try_mul`] for fallible products.
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("matrix shapes must agree")
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = &self[(r, c)];
                    if !a.is_exact_zero() && !x.is_exact_zero() {
                        acc += a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self[(r, c)].clone()
            } else {
                other[(r - self.rows, c)].clone()
            }
        })
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.hstack(b).vstack(&c.hstack(d))
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(r + r0, c + c0)].clone())
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            self[(r / other.rows, c / other.cols)].clone() * other[(r % other.rows, c % other.cols)].clone()
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, eps: f64) -> bool {
        self.data.iter().all(|x| x.is_zero_tol(eps))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Gauss–Jordan elimination with magnitude pivoting. Entries with
    /// magnitude `<= eps` count as zero (exact fields pass `0.0`).
    pub fn rref_with(&self, eps: f64) -> Rref<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let mut best = None;
            let mut best_mag = eps;
            for r in row..m.rows {
                let mag = m[(r, col)].magnitude();
                if !m[(r, col)].is_zero_tol(eps) && (best.is_none() || mag > best_mag) {
                    best = Some(r);
                    best_mag = mag;
                    if F::EXACT {
                        break;
                    }
                }
            }
            let Some(p) = best else { continue };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m[(row, col)].inv().expect("pivot is nonzero");
            for c in col..m.cols {
                let v = m[(row, c)].clone() * inv.clone();
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_exact_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(row, c)].is_exact_zero() {
                        continue;
                    }
                    let v = m[(r, c)].clone() - factor.clone() * m[(row, c)].clone();
                    m[(r, c)] = v;
                }
                m[(r, col)] = F::zero();
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    /// Kernel basis from the reduced row echelon form.
    pub fn kernel_rref(&self, eps: f64) -> Vec<Vec<F>> {
        let Rref { matrix, pivots } = self.rref_with(eps);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -matrix[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `self · x = b`, returning one solution if the system is consistent.
    pub fn solve(&self, b: &[F], eps: f64) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let Rref { matrix, pivots } = aug.rref_with(eps);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = matrix[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self, eps: f64) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&Self::identity(n));
        let Rref { matrix, pivots } = aug.rref_with(eps);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(matrix.submatrix(0..n, n..2 * n))
    }

    pub fn determinant(&self) -> Option<F> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_exact_zero()) else {
                return Some(F::zero());
            };
            if p != col {
                for c in 0..n {
                    m.data.swap(p * n + c, col * n + c);
                }
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = det * pivot.clone();
            let inv = pivot.inv()?;
            for r in col + 1..n {
                let factor = m[(r, col)].clone() * inv.clone();
                if factor.is_exact_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m[(r, c)].clone() - factor.clone() * m[(col, c)].clone();
                    m[(r, c)] = v;
                }
            }
        }
        Some(det)
    }

    /// Row-major JSON array of arrays.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|r| Value::Array((0..self.cols).map(|c| self[(r, c)].to_json()).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &Value, rows: usize, cols: usize) -> Result<Self> {
        let bad = |d: String| AlgebraError::Parse(d);
        let arr = v.as_array().ok_or_else(|| bad("matrix must be an array".into()))?;
        if arr.len() != rows {
            return Err(bad(format!("expected {rows} rows, got {}", arr.len())));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for row in arr {
            let row = row.as_array().ok_or_else(|| bad("row must be an array".into()))?;
            if row.len() != cols {
                return Err(bad(format!("expected {cols} columns, got {}", row.len())));
            }
            for x in row {
                data.push(F::from_json(x)?);
            }
        }
        Ok(Matrix { rows, cols, data })
    }
}

impl<F: LinAlg> Matrix<F> {
    pub fn rank(&self, eps: f64) -> usize {
        F::rank_of(self, eps)
    }

    pub fn kernel(&self, eps: f64) -> Vec<Vec<F>> {
        F::kernel_of(self, eps)
    }

    /// Basis of the column space.
    pub fn image(&self, eps: f64) -> Vec<Vec<F>> {
        F::image_of(self, eps)
    }
}

/// Linear algebra primitives that depend on the arithmetic model.
pub trait LinAlg: Scalar {
    fn rank_of(m: &Matrix<Self>, eps: f64) -> usize {
        m.rref_with(eps).pivots.len()
    }
    fn kernel_of(m: &Matrix<Self>, eps: f64) -> Vec<Vec<Self>> {
        m.kernel_rref(eps)
    }
    fn image_of(m: &Matrix<Self>, eps: f64) -> Vec<Vec<Self>> {
        let pivots = m.rref_with(eps).pivots;
        pivots.iter().map(|&c| m.column(c)).collect()
    }
}

impl LinAlg for crate::scalar::Q {}
impl LinAlg for crate::scalar::QI {}

fn to_nalgebra(m: &Matrix<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

struct Svd {
    v_t: DMatrix<C64>,
    sigma: Vec<f64>,
    cutoff: f64,
}

fn svd(m: &Matrix<C64>, eps: f64) -> Svd {
    let na = to_nalgebra(m);
    let s = na.svd(false, true);
    let sigma: Vec<f64> = s.singular_values.iter().copied().collect();
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    Svd {
        v_t: s.v_t.expect("requested V^T"),
        sigma,
        cutoff: eps * smax,
    }
}

impl LinAlg for C64 {
    fn rank_of(m: &Matrix<C64>, eps: f64) -> usize {
        if m.rows() == 0 || m.cols() == 0 {
            return 0;
        }
        let s = svd(m, eps);
        s.sigma.iter().filter(|&&x| x > s.cutoff && x > 0.0).count()
    }

    fn kernel_of(m: &Matrix<C64>, eps: f64) -> Vec<Vec<C64>> {
        let n = m.cols();
        if n == 0 {
            return Vec::new();
        }
        if m.rows() == 0 {
            return (0..n).map(|i| (0..n).map(|j| if i == j { C64::one() } else { C64::zero() }).collect()).collect();
        }
        // Pad to a square system so the full right singular basis is available.
        let padded = if m.rows() < n { m.vstack(&Matrix::zeros(n - m.rows(), n)) } else { m.clone() };
        let s = svd(&padded, eps);
        let rank = s.sigma.iter().filter(|&&x| x > s.cutoff && x > 0.0).count();
        // nalgebra orders singular values decreasingly.
        let mut order: Vec<usize> = (0..s.sigma.len()).collect();
        order.sort_by(|&a, &b| s.sigma[b].total_cmp(&s.sigma[a]));
        order[rank..]
            .iter()
            .map(|&i| (0..n).map(|j| s.v_t[(i, j)].conj()).collect())
            .collect()
    }

    fn image_of(m: &Matrix<C64>, eps: f64) -> Vec<Vec<C64>> {
        if m.rows() == 0 || m.cols() == 0 {
            return Vec::new();
        }
        let s = svd(m, eps);
        let mut order: Vec<usize> = (0..s.sigma.len()).collect();
        order.sort_by(|&a, &b| s.sigma[b].total_cmp(&s.sigma[a]));
        // nalgebra's left singular vectors can lose accuracy inside clusters of
        // equal singular values; `m v / σ` from the right vectors does not.
        order
            .into_iter()
            .filter(|&i| s.sigma[i] > s.cutoff && s.sigma[i] > 0.0)
            .map(|i| {
                let v: Vec<C64> = (0..m.cols()).map(|j| s.v_t[(i, j)].conj()).collect();
                let scale = C64::new(1.0 / s.sigma[i], 0.0);
                m.apply(&v).into_iter().map(|x| x * scale).collect()
            })
            .collect()
    }
}
