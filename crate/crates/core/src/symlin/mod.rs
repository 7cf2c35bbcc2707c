//! Dense symmetric linear algebra and the polynomial primitives used by the
//! cone constructions, the oracles and the solver.
//!
//! Sign convention: the characteristic coefficients `E_k(X)` are read off
//! `det(X + tI) = t^n + E_1 t^(n-1) + ... + E_n`, so `E_k(X) = e_k(lambda(X))`.
//! Many texts expand `det(tI - X)` instead, which flips the sign of the odd
//! coefficients.

mod basis;
mod eigen;
mod matrix;
mod poly;
mod svd;

pub use basis::{cholesky, complement_basis, inv_sqrt_pd, schur_complement, ComplementBasis};
pub use eigen::{eigvals_sym, sym_eigen, SymEigen};
pub use matrix::{Matrix, SymMatrix};
pub use poly::{charpoly_coeffs, elem_sym, elem_sym_all};
pub use svd::jacobi_svd;

/// Numerical tolerances shared by the library. Passed explicitly; nothing
/// reads ambient state.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    /// Orthonormality of complement bases (`max|V^T V - I|`, `max|V^T 1|`).
    pub orthonormality: f64,
    /// Relative threshold below which a Schur-complement pivot is singular.
    pub pivot: f64,
    /// Relative smallest eigenvalue below which a matrix is not treated as PD.
    pub definiteness: f64,
    /// Width of the band around zero in which oracle margins count as boundary.
    pub boundary: f64,
    /// Width of the band around zero in which lifted feasibility margins count as boundary.
    pub margin: f64,
    /// Relative residual accepted by projection-form (dual) membership tests.
    pub dual_residual: f64,
    /// Slack allowed in majorization checks.
    pub majorization: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            orthonormality: 1e-12,
            pivot: 1e-12,
            definiteness: 1e-10,
            boundary: 1e-6,
            margin: 1e-9,
            dual_residual: 1e-7,
            majorization: 1e-9,
        }
    }
}

/// Number of free entries of an `n x n` symmetric matrix.
pub fn svec_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Position of entry `(i, j)` in the row-major upper-triangle vectorization
/// `(0,0), (0,1), .., (0,n-1), (1,1), ..`. Off-diagonal entries are stored
/// unscaled, i.e. the scalar is `X_ij = X_ji` itself.
pub fn svec_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

/// Inverse of [`svec_index`].
pub fn svec_entry(n: usize, mut p: usize) -> (usize, usize) {
    for i in 0..n {
        let row = n - i;
        if p < row {
            return (i, i + p);
        }
        p -= row;
    }
    panic!("svec position out of range for dimension {n}");
}

/// Infer `n` from `n(n+1)/2`.
pub fn svec_dim(len: usize) -> Option<usize> {
    let mut n = 0;
    while svec_len(n) < len {
        n += 1;
    }
    (svec_len(n) == len).then_some(n)
}
