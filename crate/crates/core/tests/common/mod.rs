//! Test-side reference computations, written without the library's own
//! routines: subset sums, a Helmert basis, nalgebra eigensolves.
#![allow(dead_code)]

use derivcone::symlin::SymMatrix;
use nalgebra::{DMatrix, SymmetricEigen};

/// `e_j(x)` by summing over all `j`-subsets.
pub fn esym_subsets(x: &[f64], j: usize) -> f64 {
    let n = x.len();
    assert!(n <= 20);
    (0u32..1 << n).filter(|m| m.count_ones() as usize == j).map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| x[i]).product::<f64>()).sum()
}

/// Coefficients of `prod (1 + x_i t)`, i.e. `e_0..e_n`.
pub fn esym_expand(x: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &xi in x {
        let mut next = vec![0.0; c.len() + 1];
        for (j, cj) in c.iter().enumerate() {
            next[j] += cj;
            next[j + 1] += cj * xi;
        }
        c = next;
    }
    c
}

/// Helmert basis of the complement of the all-ones vector, `n x (n-1)`.
pub fn helmert(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n - 1, |i, j| {
        let s = ((j + 1) * (j + 2)) as f64;
        if i <= j {
            1.0 / s.sqrt()
        } else if i == j + 1 {
            -((j + 1) as f64) / s.sqrt()
        } else {
            0.0
        }
    })
}

pub fn to_na(x: &SymMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(x.dim(), x.dim(), |i, j| x.get(i, j))
}

pub fn from_svec(n: usize, v: &[f64]) -> DMatrix<f64> {
    to_na(&SymMatrix::from_svec(n, v))
}

/// Eigenvalues in decreasing order.
pub fn eigs(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn det(m: &DMatrix<f64>) -> f64 {
    m.clone().determinant()
}

/// Membership in `{x : e_1(x), .., e_{n-k}(x) >= 0}`.
pub fn in_orthant_relaxation(x: &[f64], k: usize) -> bool {
    let e = esym_expand(x);
    (1..=x.len() - k).all(|j| e[j] >= 0.0)
}

/// The 3-ellipse matrix written out entry by entry.
pub fn ellipse(x: f64, y: f64, z: f64) -> DMatrix<f64> {
    let a = y - 4.0 * z;
    #[rustfmt::skip]
    let rows = [
        [5.0 * z + 3.0 * x, y, a, 0.0, y, 0.0, 0.0, 0.0],
        [y, 5.0 * z + x, 0.0, a, 0.0, y, 0.0, 0.0],
        [a, 0.0, 5.0 * z + x, y, 0.0, 0.0, y, 0.0],
        [0.0, a, y, 5.0 * z - x, 0.0, 0.0, 0.0, y],
        [y, 0.0, 0.0, 0.0, 11.0 * z + x, y, a, 0.0],
        [0.0, y, 0.0, 0.0, y, 11.0 * z - x, 0.0, a],
        [0.0, 0.0, y, 0.0, a, 0.0, 11.0 * z - x, y],
        [0.0, 0.0, 0.0, y, 0.0, a, y, 11.0 * z - 3.0 * x],
    ];
    DMatrix::from_fn(8, 8, |i, j| rows[i][j])
}
