use crate::error::{Error, Result};
use crate::symlin::{inv_sqrt_pd, SymMatrix, ToleranceConfig};

/// Linear pencil `A(x) = sum_i x_i A_i` of `m x m` symmetric matrices with a
/// direction `e` such that `A(e)` is positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil {
    m: usize,
    a: Vec<SymMatrix>,
    e: Vec<f64>,
}

impl Pencil {
    pub fn new(a: Vec<SymMatrix>, e: Vec<f64>) -> Result<Self> {
        let m = a.first().map(|x| x.dim()).unwrap_or(0);
        if m == 0 {
            return Err(Error::Argument("pencil needs at least one nonempty matrix".into()));
        }
        if a.iter().any(|x| x.dim() != m) {
            return Err(Error::Argument("pencil matrices must share one dimension".into()));
        }
        if e.len() != a.len() {
            return Err(Error::Argument(format!("direction has {} entries, pencil has {} matrices", e.len(), a.len())));
        }
        let p = Pencil { m, a, e };
        inv_sqrt_pd(&p.eval(&p.e), &ToleranceConfig::default())?;
        Ok(p)
    }

    /// Build from 0-based `(i, j, value)` triplets; each triplet sets both
    /// `(i, j)` and `(j, i)`.
    pub fn from_triplets(m: usize, a: &[Vec<(usize, usize, f64)>], e: Vec<f64>) -> Result<Self> {
        let mut mats = Vec::with_capacity(a.len());
        for trip in a {
            let mut s = SymMatrix::zeros(m);
            for &(i, j, v) in trip {
                if i >= m || j >= m {
                    return Err(Error::Argument(format!("entry ({i},{j}) outside a {m}x{m} matrix")));
                }
                s.set(i, j, v);
            }
            mats.push(s);
        }
        Pencil::new(mats, e)
    }

    pub fn to_triplets(&self) -> Vec<Vec<(usize, usize, f64)>> {
        self.a
            .iter()
            .map(|s| {
                let mut t = vec![];
                for i in 0..self.m {
                    for j in i..self.m {
                        if s.get(i, j) != 0.0 {
                            t.push((i, j, s.get(i, j)));
                        }
                    }
                }
                t
            })
            .collect()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn matrices(&self) -> &[SymMatrix] {
        &self.a
    }

    pub fn e(&self) -> &[f64] {
        &self.e
    }

    pub fn eval(&self, x: &[f64]) -> SymMatrix {
        let mut out = SymMatrix::zeros(self.m);
        for (ai, &xi) in self.a.iter().zip(x) {
            if xi != 0.0 {
                out = out.add(&ai.scaled(xi));
            }
        }
        out
    }

    /// `S A_i S` with `S = A(e)^{-1/2}`, so that the normalized pencil maps
    /// `e` to the identity.
    pub fn normalized(&self) -> Result<Vec<SymMatrix>> {
        let s = inv_sqrt_pd(&self.eval(&self.e), &ToleranceConfig::default())?;
        Ok(self.a.iter().map(|a| a.congruence(s.as_matrix())).collect())
    }
}

/// The `8 x 8` pencil in `(x, y, z)` whose determinant vanishes on the
/// ellipse-like curve of points with distance sum 8 to the foci
/// `(0,0)`, `(0,4)`, `(3,0)`; `e = (0, 0, 1)`.
pub fn three_ellipse() -> Pencil {
    let ax = SymMatrix::from_diag(&[3.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -3.0]);
    let mut az = SymMatrix::from_diag(&[5.0, 5.0, 5.0, 5.0, 11.0, 11.0, 11.0, 11.0]);
    for (i, j) in [(0, 2), (1, 3), (4, 6), (5, 7)] {
        az.set(i, j, -4.0);
    }
    let mut ay = SymMatrix::zeros(8);
    for (i, j) in [(0, 1), (0, 2), (0, 4), (1, 3), (1, 5), (2, 3), (2, 6), (3, 7), (4, 5), (4, 6), (5, 7), (6, 7)] {
        ay.set(i, j, 1.0);
    }
    Pencil::new(vec![ax, ay, az], vec![0.0, 0.0, 1.0]).expect("A_z is positive definite")
}
