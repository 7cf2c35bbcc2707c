use super::{sym_eigen, Matrix, SymMatrix, ToleranceConfig};
use crate::error::{arg, Error, Result};

/// An `n x (n-1)` matrix `V` with orthonormal columns spanning the orthogonal
/// complement of the all-ones vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementBasis {
    v: Matrix,
}

impl ComplementBasis {
    /// Wraps a caller-supplied basis after checking both defining properties.
    pub fn from_matrix(v: Matrix, tol: &ToleranceConfig) -> Result<Self> {
        let n = v.rows();
        if n < 2 || v.cols() != n - 1 {
            return arg("complement basis must be n x (n-1) with n >= 2");
        }
        let basis = Self { v };
        let (orth, ones) = basis.defect();
        if orth > tol.orthonormality || ones > tol.orthonormality {
            return arg(format!("not a complement basis: |V^T V - I| = {orth:e}, |V^T 1| = {ones:e}"));
        }
        Ok(basis)
    }

    pub fn n(&self) -> usize {
        self.v.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.v
    }

    /// `(max|V^T V - I|, max|V^T 1|)`.
    pub fn defect(&self) -> (f64, f64) {
        let n = self.n();
        let gram = self.v.transpose().matmul(&self.v);
        let mut orth: f64 = 0.0;
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let target = if i == j { 1.0 } else { 0.0 };
                orth = orth.max((gram[(i, j)] - target).abs());
            }
        }
        let ones = (0..n - 1)
            .map(|j| (0..n).map(|i| self.v[(i, j)]).sum::<f64>().abs())
            .fold(0.0, f64::max);
        (orth, ones)
    }

    /// The orthogonal matrix `Q = [V, 1/sqrt(n)]`.
    pub fn q(&self) -> Matrix {
        let n = self.n();
        let u = 1.0 / (n as f64).sqrt();
        Matrix::from_fn(n, n, |i, j| if j < n - 1 { self.v[(i, j)] } else { u })
    }

    /// `V^T diag(x) V`.
    pub fn compress_diag(&self, x: &[f64]) -> SymMatrix {
        let n = self.n();
        assert_eq!(x.len(), n);
        SymMatrix::from_fn(n - 1, |a, b| (0..n).map(|i| self.v[(i, a)] * x[i] * self.v[(i, b)]).sum())
    }
}

/// The Householder reflector sending `1/sqrt(n)` to the first standard basis
/// vector; its columns `2..n` form `V`. Same input, bitwise-identical output.
pub fn complement_basis(n: usize) -> Result<ComplementBasis> {
    if n < 2 {
        return arg(format!("complement basis needs n >= 2, got {n}"));
    }
    let u = 1.0 / (n as f64).sqrt();
    let mut w = vec![u; n];
    w[0] -= 1.0;
    let ww: f64 = w.iter().map(|x| x * x).sum();
    let v = Matrix::from_fn(n, n - 1, |i, j| {
        let col = j + 1;
        let delta = if i == col { 1.0 } else { 0.0 };
        delta - 2.0 * w[i] * w[col] / ww
    });
    Ok(ComplementBasis { v })
}

/// `M11 - M12 M22^-1 M12^T` for the partition with scalar `(n,n)` corner.
pub fn schur_complement(m: &SymMatrix, tol: &ToleranceConfig) -> Result<SymMatrix> {
    let n = m.dim();
    if n < 2 {
        return arg("Schur complement needs a matrix of size >= 2");
    }
    let pivot = m.get(n - 1, n - 1);
    let threshold = tol.pivot * m.max_abs();
    if pivot.abs() <= threshold {
        return Err(Error::SingularPivot { pivot, threshold });
    }
    Ok(SymMatrix::from_fn(n - 1, |i, j| m.get(i, j) - m.get(i, n - 1) * m.get(j, n - 1) / pivot))
}

/// Symmetric `B^{-1/2}` for positive definite `B`.
pub fn inv_sqrt_pd(b: &SymMatrix, tol: &ToleranceConfig) -> Result<SymMatrix> {
    let eig = sym_eigen(b)?;
    let scale = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min_eig = eig.values.last().copied().unwrap_or(0.0);
    if b.dim() > 0 && min_eig <= tol.definiteness * scale {
        return Err(Error::NotPositiveDefinite { min_eig });
    }
    Ok(eig.map(|l| 1.0 / l.sqrt()))
}

/// Lower Cholesky factor `L` with `A = L L^T`.
pub fn cholesky(a: &SymMatrix) -> Result<Matrix> {
    let n = a.dim();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { min_eig: d });
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}
