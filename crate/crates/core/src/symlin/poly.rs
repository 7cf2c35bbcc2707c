use super::{eigvals_sym, SymMatrix};
use crate::error::{arg, Result};

/// `e_0(x), .., e_k(x)` from the coefficients of `prod_i (t + x_i)`,
/// accumulated one root at a time in `O(nk)`.
pub fn elem_sym_all(x: &[f64], k: usize) -> Vec<f64> {
    let mut c = vec![0.0; k + 1];
    c[0] = 1.0;
    for (i, &xi) in x.iter().enumerate() {
        for j in (1..=k.min(i + 1)).rev() {
            c[j] += xi * c[j - 1];
        }
    }
    c
}

/// Elementary symmetric polynomial `e_k(x)`; `e_0 = 1`.
pub fn elem_sym(x: &[f64], k: usize) -> Result<f64> {
    if k > x.len() {
        return arg(format!("degree {k} exceeds the number of variables {}", x.len()));
    }
    Ok(elem_sym_all(x, k)[k])
}

/// `(E_1(X), .., E_n(X))` with `det(X + tI) = t^n + E_1 t^(n-1) + .. + E_n`.
pub fn charpoly_coeffs(x: &SymMatrix) -> Result<Vec<f64>> {
    let lambda = eigvals_sym(x)?;
    let mut c = elem_sym_all(&lambda, lambda.len());
    c.remove(0);
    Ok(c)
}
