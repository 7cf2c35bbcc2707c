use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};

/// Dense row-major real matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_slice(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return arg(format!("expected {} entries for a {rows}x{cols} matrix, got {}", rows * cols, data.len()));
        }
        Ok(Self { rows, cols, data: data.to_vec() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// `max |a_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Symmetric part `(A + A^T) / 2` of a square matrix.
    pub fn symmetric_part(&self) -> SymMatrix {
        assert_eq!(self.rows, self.cols);
        SymMatrix::from_fn(self.rows, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Dense symmetric matrix. Both triangles are stored and kept bitwise equal:
/// every constructor and mutator mirrors.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct SymMatrix {
    inner: Matrix,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { inner: Matrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { inner: Matrix::identity(n) }
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m.inner[(i, i)] = *v;
        }
        m
    }

    /// Builds from the upper triangle: `f` is only called with `i <= j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self { inner: m }
    }

    /// Row-major rows; rejects input that is not symmetric to within `1e-12`
    /// relative, then mirrors the upper triangle.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return arg("matrix rows must form a square array");
        }
        let scale = rows.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            for j in 0..i {
                if (rows[i][j] - rows[j][i]).abs() > 1e-12 * (1.0 + scale) {
                    return arg(format!("matrix is not symmetric at ({i},{j})"));
                }
            }
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    /// Entries from the packed upper triangle (see [`super::svec_index`]).
    pub fn from_svec(n: usize, v: &[f64]) -> Self {
        assert_eq!(v.len(), super::svec_len(n));
        Self::from_fn(n, |i, j| v[super::svec_index(n, i, j)])
    }

    pub fn to_svec(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(super::svec_len(n));
        for i in 0..n {
            for j in i..n {
                out.push(self.get(i, j));
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.inner.rows
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.inner[(i, j)] = v;
        self.inner[(j, i)] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.inner[(i, j)] += v;
        if i != j {
            self.inner[(j, i)] += v;
        }
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix {
        self.inner
    }

    pub fn as_slice(&self) -> &[f64] {
        self.inner.as_slice()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }

    /// Trace inner product `tr(A B)`.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        self.inner.data.iter().zip(&other.inner.data).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        let mut m = self.clone();
        m.inner.data.iter_mut().for_each(|v| *v *= s);
        m
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim(), other.dim());
        let mut m = self.clone();
        m.inner.data.iter_mut().zip(&other.inner.data).for_each(|(a, b)| *a += b);
        m
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        self.add(&other.scaled(-1.0))
    }

    /// `V^T X V` for a general `n x r` matrix `V`.
    pub fn congruence_t(&self, v: &Matrix) -> SymMatrix {
        assert_eq!(v.rows(), self.dim());
        v.transpose().matmul(&self.inner).matmul(v).symmetric_part()
    }

    /// `V X V^T` for a general `r x n` matrix `V`.
    pub fn congruence(&self, v: &Matrix) -> SymMatrix {
        assert_eq!(v.cols(), self.dim());
        v.matmul(&self.inner).matmul(&v.transpose()).symmetric_part()
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        self.inner.matmul(other)
    }
}

impl TryFrom<Matrix> for SymMatrix {
    type Error = crate::error::Error;
    fn try_from(m: Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return arg("symmetric matrix must be square");
        }
        let rows: Vec<Vec<f64>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
        SymMatrix::from_rows(&rows)
    }
}

impl From<SymMatrix> for Matrix {
    fn from(s: SymMatrix) -> Matrix {
        s.inner
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym")?;
        self.inner.fmt(f)
    }
}
