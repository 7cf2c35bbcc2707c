use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::symlin::{svec_entry, svec_index, svec_len, Matrix, SymMatrix};

/// Affine scalar functional `constant + sum_i coeff_i * v_i` over a flat
/// variable vector. Terms are kept sorted by variable and merged.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AffineScalar {
    pub constant: f64,
    pub terms: Vec<(usize, f64)>,
}

impl AffineScalar {
    pub fn constant(c: f64) -> Self {
        Self { constant: c, terms: vec![] }
    }

    pub fn var(i: usize) -> Self {
        Self { constant: 0.0, terms: vec![(i, 1.0)] }
    }

    pub fn from_terms(constant: f64, terms: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut s = Self { constant, terms: terms.into_iter().collect() };
        s.canonicalize();
        s
    }

    fn canonicalize(&mut self) {
        self.terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(self.terms.len());
        for &(i, c) in &self.terms {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += c,
                _ => merged.push((i, c)),
            }
        }
        merged.retain(|t| t.1 != 0.0);
        self.terms = merged;
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(i, c)| c * v[i]).sum::<f64>()
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = Self {
            constant: self.constant * s,
            terms: self.terms.iter().map(|&(i, c)| (i, c * s)).collect(),
        };
        out.terms.retain(|t| t.1 != 0.0);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.constant + other.constant, self.terms.iter().chain(&other.terms).copied())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(-1.0))
    }

    pub fn add_scaled(&mut self, other: &Self, s: f64) {
        self.constant += s * other.constant;
        self.terms.extend(other.terms.iter().map(|&(i, c)| (i, c * s)));
        self.canonicalize();
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.last().map(|t| t.0)
    }

    /// Replace each variable `i` by `map[i]`.
    pub fn substitute(&self, map: &[AffineScalar]) -> Self {
        let mut out = Self::constant(self.constant);
        for &(i, c) in &self.terms {
            out.constant += c * map[i].constant;
            out.terms.extend(map[i].terms.iter().map(|&(j, d)| (j, c * d)));
        }
        out.canonicalize();
        out
    }

    /// Shift every variable index by `offset` (negative shifts allowed).
    pub fn reindex(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_terms(self.constant, self.terms.iter().map(|&(i, c)| (f(i), c)))
    }
}

/// Sum of a sequence of affine scalars.
pub fn sum_exprs<'a>(items: impl IntoIterator<Item = &'a AffineScalar>) -> AffineScalar {
    let mut out = AffineScalar::default();
    for it in items {
        out.constant += it.constant;
        out.terms.extend_from_slice(&it.terms);
    }
    AffineScalar::from_terms(out.constant, out.terms)
}

/// Affine symmetric-matrix expression: one [`AffineScalar`] per packed
/// upper-triangle entry.
#[derive(Debug, Clone, PartialEq)]
pub struct SymExpr {
    dim: usize,
    entries: Vec<AffineScalar>,
}

impl SymExpr {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![AffineScalar::default(); svec_len(dim)] }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> AffineScalar) -> Self {
        let mut entries = Vec::with_capacity(svec_len(dim));
        for i in 0..dim {
            for j in i..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    /// Matrix whose packed entries are the given expressions.
    pub fn from_svec(dim: usize, entries: Vec<AffineScalar>) -> Self {
        assert_eq!(entries.len(), svec_len(dim));
        Self { dim, entries }
    }

    pub fn constant(m: &SymMatrix) -> Self {
        Self::from_fn(m.dim(), |i, j| AffineScalar::constant(m.get(i, j)))
    }

    pub fn identity_times(dim: usize, s: &AffineScalar) -> Self {
        Self::from_fn(dim, |i, j| if i == j { s.clone() } else { AffineScalar::default() })
    }

    pub fn diag(d: &[AffineScalar]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i].clone() } else { AffineScalar::default() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &AffineScalar {
        &self.entries[svec_index(self.dim, i, j)]
    }

    pub fn svec(&self) -> &[AffineScalar] {
        &self.entries
    }

    pub fn into_svec(self) -> Vec<AffineScalar> {
        self.entries
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self { dim: self.dim, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self { dim: self.dim, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|e| e.scaled(s)).collect() }
    }

    pub fn trace(&self) -> AffineScalar {
        sum_exprs((0..self.dim).map(|i| self.get(i, i)))
    }

    pub fn diagonal(&self) -> Vec<AffineScalar> {
        (0..self.dim).map(|i| self.get(i, i).clone()).collect()
    }

    /// `V^T X V` for an `n x r` matrix `V` (result is `r x r`).
    pub fn congruence_t(&self, v: &Matrix) -> Self {
        assert_eq!(v.rows(), self.dim);
        self.congruence_with(v.cols(), |a, i| v[(i, a)])
    }

    /// `V X V^T` for an `r x n` matrix `V` (result is `r x r`).
    pub fn congruence(&self, v: &Matrix) -> Self {
        assert_eq!(v.cols(), self.dim);
        self.congruence_with(v.rows(), |a, i| v[(a, i)])
    }

    // out_ab = sum_{ij} w(a,i) X_ij w(b,j)
    fn congruence_with(&self, r: usize, w: impl Fn(usize, usize) -> f64) -> Self {
        let n = self.dim;
        Self::from_fn(r, |a, b| {
            let mut acc = AffineScalar::default();
            for i in 0..n {
                for j in 0..n {
                    let c = w(a, i) * w(b, j);
                    if c != 0.0 {
                        let e = self.get(i, j);
                        acc.constant += c * e.constant;
                        acc.terms.extend(e.terms.iter().map(|&(k, d)| (k, c * d)));
                    }
                }
            }
            AffineScalar::from_terms(acc.constant, acc.terms)
        })
    }

    /// `<M, X> = tr(M X)` for a constant symmetric `M`.
    pub fn inner_with(&self, m: &SymMatrix) -> AffineScalar {
        let mut acc = AffineScalar::default();
        for (p, e) in self.entries.iter().enumerate() {
            let (i, j) = svec_entry(self.dim, p);
            let c = if i == j { m.get(i, i) } else { 2.0 * m.get(i, j) };
            if c != 0.0 {
                acc.constant += c * e.constant;
                acc.terms.extend(e.terms.iter().map(|&(k, d)| (k, c * d)));
            }
        }
        AffineScalar::from_terms(acc.constant, acc.terms)
    }

    pub fn eval(&self, v: &[f64]) -> SymMatrix {
        SymMatrix::from_fn(self.dim, |i, j| self.get(i, j).eval(v))
    }
}

/// Sparse symmetric matrix as upper-triangle triplets `(i, j, v)`, `i <= j`,
/// meaning `M_ij = M_ji = v`. Sorted and merged.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseSym {
    pub dim: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    pub fn new(dim: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (i, j, v) in entries {
            let key = if i <= j { (i, j) } else { (j, i) };
            *map.entry(key).or_insert(0.0) += v;
        }
        Self { dim, entries: map.into_iter().filter(|&(_, v)| v != 0.0).map(|((i, j), v)| (i, j, v)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> SymMatrix {
        let mut m = SymMatrix::zeros(self.dim);
        for &(i, j, v) in &self.entries {
            m.add_to(i, j, v);
        }
        m
    }

    pub fn from_dense(m: &SymMatrix) -> Self {
        let n = m.dim();
        let mut entries = vec![];
        for i in 0..n {
            for j in i..n {
                let v = m.get(i, j);
                if v != 0.0 {
                    entries.push((i, j, v));
                }
            }
        }
        Self { dim: n, entries }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.2.abs()))
    }
}

/// `constant + sum_k v_{var_k} * coeff_k`, all blocks symmetric of size `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMatrixMap {
    pub dim: usize,
    pub constant: SparseSym,
    pub coeffs: Vec<(usize, SparseSym)>,
}

impl AffineMatrixMap {
    pub fn from_expr(e: &SymExpr) -> Self {
        let n = e.dim();
        let mut constant = vec![];
        let mut by_var: BTreeMap<usize, Vec<(usize, usize, f64)>> = BTreeMap::new();
        for (p, entry) in e.svec().iter().enumerate() {
            let (i, j) = svec_entry(n, p);
            if entry.constant != 0.0 {
                constant.push((i, j, entry.constant));
            }
            for &(k, c) in &entry.terms {
                by_var.entry(k).or_default().push((i, j, c));
            }
        }
        let coeffs = by_var
            .into_iter()
            .map(|(k, ents)| (k, SparseSym::new(n, ents)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        Self { dim: n, constant: SparseSym::new(n, constant), coeffs }
    }

    pub fn to_expr(&self) -> SymExpr {
        let n = self.dim;
        let mut entries = vec![AffineScalar::default(); svec_len(n)];
        for &(i, j, v) in &self.constant.entries {
            entries[svec_index(n, i, j)].constant += v;
        }
        for (k, m) in &self.coeffs {
            for &(i, j, v) in &m.entries {
                entries[svec_index(n, i, j)].terms.push((*k, v));
            }
        }
        let entries = entries.into_iter().map(|e| AffineScalar::from_terms(e.constant, e.terms)).collect();
        SymExpr::from_svec(n, entries)
    }

    pub fn eval(&self, v: &[f64]) -> SymMatrix {
        let mut m = self.constant.to_dense();
        for (k, c) in &self.coeffs {
            for &(i, j, x) in &c.entries {
                m.add_to(i, j, x * v[*k]);
            }
        }
        m
    }

    pub fn max_var(&self) -> Option<usize> {
        self.coeffs.iter().map(|c| c.0).max()
    }

    pub fn substitute(&self, map: &[AffineScalar]) -> Self {
        let n = self.dim;
        let mut constant = self.constant.entries.clone();
        let mut by_var: BTreeMap<usize, Vec<(usize, usize, f64)>> = BTreeMap::new();
        for (k, m) in &self.coeffs {
            let image = &map[*k];
            for &(i, j, v) in &m.entries {
                if image.constant != 0.0 {
                    constant.push((i, j, v * image.constant));
                }
                for &(h, c) in &image.terms {
                    by_var.entry(h).or_default().push((i, j, v * c));
                }
            }
        }
        let coeffs = by_var
            .into_iter()
            .map(|(k, ents)| (k, SparseSym::new(n, ents)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        Self { dim: n, constant: SparseSym::new(n, constant), coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_scalar_merges_terms() {
        let a = AffineScalar::from_terms(1.0, [(2, 1.0), (0, 2.0), (2, -1.0)]);
        assert_eq!(a.terms, vec![(0, 2.0)]);
        assert_eq!(a.eval(&[3.0, 0.0, 0.0]), 7.0);
    }

    #[test]
    fn substitution_composes() {
        let a = AffineScalar::from_terms(1.0, [(0, 2.0), (1, 3.0)]);
        let map = vec![AffineScalar::from_terms(0.5, [(4, 1.0)]), AffineScalar::var(4)];
        let b = a.substitute(&map);
        assert_eq!(b.constant, 2.0);
        assert_eq!(b.terms, vec![(4, 5.0)]);
    }

    #[test]
    fn matrix_map_roundtrips_through_expr() {
        let e = SymExpr::from_fn(2, |i, j| AffineScalar::from_terms((i + j) as f64, [(i, 1.0), (3, j as f64)]));
        let m = AffineMatrixMap::from_expr(&e);
        let back = m.to_expr();
        let v = [0.3, -1.0, 0.0, 2.0];
        assert_eq!(e.eval(&v), back.eval(&v));
        assert_eq!(m.eval(&v), e.eval(&v));
    }

    #[test]
    fn congruence_of_diag_expression() {
        let x: Vec<AffineScalar> = (0..3).map(AffineScalar::var).collect();
        let v = Matrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        let c = SymExpr::diag(&x).congruence_t(&v).eval(&[1.0, 2.0, 3.0]);
        assert_eq!((c.get(0, 0), c.get(0, 1), c.get(1, 1)), (4.0, 3.0, 5.0));
    }

    #[test]
    fn inner_product_counts_off_diagonals_twice() {
        let x = SymExpr::from_svec(2, vec![AffineScalar::var(0), AffineScalar::var(1), AffineScalar::var(2)]);
        let m = SymMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(x.inner_with(&m).terms, vec![(0, 1.0), (1, 2.0)]);
    }
}
