use super::Matrix;

/// One-sided Jacobi SVD of a square matrix: returns `(sigma, V)` with
/// `A V = U diag(sigma)` for some `U` with orthonormal columns. Small singular
/// values come out with high relative accuracy, unlike the eigenvalues of
/// `A^T A` formed explicitly.
pub fn jacobi_svd(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.cols();
    let rows = a.rows();
    // work on columns stored contiguously
    let mut u: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = u[p].iter().map(|x| x * x).sum();
                let beta: f64 = u[q].iter().map(|x| x * x).sum();
                let gamma: f64 = u[p].iter().zip(&u[q]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (x, y) = (u[p][i], u[q][i]);
                    u[p][i] = c * x - s * y;
                    u[q][i] = s * x + c * y;
                }
                for i in 0..n {
                    let (x, y) = (v[p][i], v[q][i]);
                    v[p][i] = c * x - s * y;
                    v[q][i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = u.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    (sigma, Matrix::from_fn(n, n, |i, j| v[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_gram_matrix() {
        let a = Matrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, -1.0, 3.0, 1.0, 0.5, 0.0, 1e-9]).unwrap();
        let (s, v) = jacobi_svd(&a);
        let av = a.matmul(&v);
        for j in 0..3 {
            let norm = (0..3).map(|i| av[(i, j)].powi(2)).sum::<f64>().sqrt();
            assert!((norm - s[j]).abs() <= 1e-14 * s[j].max(1.0));
        }
        let g = v.transpose().matmul(&v);
        for i in 0..3 {
            for j in 0..3 {
                assert!((g[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        let prod: f64 = s.iter().product();
        let det: f64 = 2.0 * (3.0 * 1e-9) - (-1e-9 - 0.5);
        assert!((prod - det.abs()).abs() < 1e-12);
    }
}
