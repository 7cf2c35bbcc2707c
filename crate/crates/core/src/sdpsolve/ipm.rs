//! Infeasible-start primal-dual path following for
//!
//! ```text
//! min c^T y   s.t.  S_b = C_b + sum_i y_i A_{b,i} ⪰ 0,   s_j = a_j^T y + a0_j >= 0
//! ```
//!
//! with multipliers `X_b ⪰ 0`, `x_j >= 0`. Each block is rescaled with the
//! Nesterov-Todd point `W` (`W S W = X`) and steps use Mehrotra's
//! predictor-corrector.

use super::{SolverConfig, Status};
use crate::symlin::{cholesky, jacobi_svd, sym_eigen, Matrix, SymMatrix};

pub(crate) struct CoreBlock {
    pub dim: usize,
    pub constant: SymMatrix,
    pub coeffs: Vec<(usize, Vec<(usize, usize, f64)>)>,
}

pub(crate) struct CoreScalar {
    pub constant: f64,
    pub terms: Vec<(usize, f64)>,
}

pub(crate) struct Core {
    pub m: usize,
    pub c: Vec<f64>,
    pub blocks: Vec<CoreBlock>,
    pub scalars: Vec<CoreScalar>,
}

pub(crate) struct CoreResult {
    pub status: Status,
    pub y: Vec<f64>,
    pub x_blocks: Vec<SymMatrix>,
    pub x_scalars: Vec<f64>,
    pub pobj: f64,
    pub dobj: f64,
    pub primal_res: f64,
    pub dual_res: f64,
    pub gap: f64,
    pub iterations: usize,
}

fn sparse_dot(entries: &[(usize, usize, f64)], x: &SymMatrix) -> f64 {
    entries.iter().map(|&(i, j, v)| if i == j { v * x.get(i, i) } else { 2.0 * v * x.get(i, j) }).sum()
}

fn frob_sparse(entries: &[(usize, usize, f64)]) -> f64 {
    entries.iter().map(|&(i, j, v)| if i == j { v * v } else { 2.0 * v * v }).sum::<f64>().sqrt()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

impl CoreBlock {
    fn eval(&self, y: &[f64]) -> SymMatrix {
        let mut s = self.constant.clone();
        for (i, ents) in &self.coeffs {
            let yi = y[*i];
            if yi != 0.0 {
                for &(p, q, v) in ents {
                    s.add_to(p, q, v * yi);
                }
            }
        }
        s
    }

    fn apply(&self, dy: &[f64]) -> SymMatrix {
        let mut s = SymMatrix::zeros(self.dim);
        for (i, ents) in &self.coeffs {
            for &(p, q, v) in ents {
                s.add_to(p, q, v * dy[*i]);
            }
        }
        s
    }

    fn adjoint_into(&self, x: &SymMatrix, out: &mut [f64], scale: f64) {
        for (i, ents) in &self.coeffs {
            out[*i] += scale * sparse_dot(ents, x);
        }
    }
}

impl CoreScalar {
    fn eval(&self, y: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(i, a)| a * y[i]).sum::<f64>()
    }

    fn apply(&self, dy: &[f64]) -> f64 {
        self.terms.iter().map(|&(i, a)| a * dy[i]).sum()
    }
}

const STALL_ITERATIONS: usize = 10;

// Per-block NT scaling data.
struct Scaling {
    g: Matrix,
    w: SymMatrix,
    d: Vec<f64>,
}

// Lower factor of a PD matrix; falls back to a clamped square root when
// roundoff has pushed the smallest pivots below zero.
fn psd_factor(x: &SymMatrix) -> Option<Matrix> {
    if let Ok(l) = cholesky(x) {
        return Some(l);
    }
    let e = sym_eigen(x).ok()?;
    let top = e.values.first().copied().unwrap_or(0.0);
    if top <= 0.0 || !top.is_finite() {
        return None;
    }
    let floor = top * f64::EPSILON;
    Some(e.map(|l| l.max(floor).sqrt()).into_matrix())
}

// W = G G^T with W S W = X; G^T S G = G^{-1} X G^{-T} = diag(d).
fn nt_scaling(x: &SymMatrix, s: &SymMatrix) -> Option<Scaling> {
    let n = x.dim();
    let lx = psd_factor(x)?;
    let ls = psd_factor(s)?;
    let (d, v) = jacobi_svd(&ls.transpose().matmul(&lx));
    if d.iter().any(|&l| l <= 0.0 || !l.is_finite()) {
        return None;
    }
    let lv = lx.matmul(&v);
    let g = Matrix::from_fn(n, n, |i, j| lv[(i, j)] / d[j].sqrt());
    let w = g.matmul(&g.transpose()).symmetric_part();
    Some(Scaling { g, w, d })
}

// Largest alpha with D + alpha*dZ ⪰ 0 for diagonal positive D (infinite if unbounded).
fn max_step_psd(d: &[f64], dz: &SymMatrix) -> f64 {
    let n = d.len();
    let sc: Vec<f64> = d.iter().map(|v| 1.0 / v.sqrt()).collect();
    let t = SymMatrix::from_fn(n, |i, j| sc[i] * dz.get(i, j) * sc[j]);
    let lmin = crate::symlin::eigvals_sym(&t).map(|v| v.last().copied().unwrap_or(0.0)).unwrap_or(f64::NEG_INFINITY);
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

fn max_step_lp(v: &[f64], dv: &[f64]) -> f64 {
    v.iter().zip(dv).filter(|(_, d)| **d < 0.0).map(|(v, d)| -v / d).fold(f64::INFINITY, f64::min)
}

// Elimination order for the Schur matrix and the row patterns of its
// Cholesky factor. Variables couple only when they share a block or scalar,
// so lifted variables private to one block cause little fill.
struct Ordering {
    // position -> variable
    perm: Vec<usize>,
    // for each position, the earlier positions in its factor row
    rows: Vec<Vec<usize>>,
}

impl Ordering {
    fn new(m: usize, groups: &[Vec<usize>]) -> Self {
        let words = m.div_ceil(64);
        let mut adj = vec![vec![0u64; words]; m];
        for g in groups {
            for &i in g {
                for &j in g {
                    if i != j {
                        adj[i][j / 64] |= 1 << (j % 64);
                    }
                }
            }
        }
        // greedy minimum degree on the elimination graph
        let mut done = vec![false; m];
        let mut perm = Vec::with_capacity(m);
        let mut cols: Vec<Vec<usize>> = Vec::with_capacity(m);
        for _ in 0..m {
            let v = (0..m)
                .filter(|&v| !done[v])
                .min_by_key(|&v| adj[v].iter().map(|w| w.count_ones()).sum::<u32>())
                .expect("a variable is left");
            done[v] = true;
            let nbrs: Vec<usize> = (0..m).filter(|&u| adj[v][u / 64] >> (u % 64) & 1 == 1).collect();
            let row = adj[v].clone();
            for &u in &nbrs {
                for (a, r) in adj[u].iter_mut().zip(&row) {
                    *a |= r;
                }
                adj[u][u / 64] &= !(1 << (u % 64));
                adj[u][v / 64] &= !(1 << (v % 64));
            }
            perm.push(v);
            cols.push(nbrs);
        }
        let mut pos = vec![0; m];
        for (p, &v) in perm.iter().enumerate() {
            pos[v] = p;
        }
        let mut rows = vec![vec![]; m];
        for (p, c) in cols.iter().enumerate() {
            for &u in c {
                rows[pos[u]].push(p);
            }
        }
        Self { perm, rows }
    }
}

struct Factor<'a> {
    order: &'a Ordering,
    // original (unpermuted) matrix, for refinement
    h: Vec<f64>,
    l: Vec<f64>,
    m: usize,
}

impl<'a> Factor<'a> {
    // Cholesky with a diagonal shift that grows until the factorization succeeds.
    fn new(h: Vec<f64>, m: usize, order: &'a Ordering) -> Option<Self> {
        let scale = (0..m).map(|i| h[i * m + i].abs()).fold(0.0, f64::max).max(1e-300);
        let hp: Vec<f64> = (0..m * m).map(|q| h[order.perm[q / m] * m + order.perm[q % m]]).collect();
        let mut shift = 0.0;
        for _ in 0..12 {
            if let Some(l) = Self::try_factor(&hp, m, shift, &order.rows) {
                return Some(Self { order, h, l, m });
            }
            shift = if shift == 0.0 { 1e-15 * scale } else { shift * 100.0 };
        }
        None
    }

    // Row-oriented Cholesky touching only the entries in `rows`.
    fn try_factor(h: &[f64], m: usize, shift: f64, rows: &[Vec<usize>]) -> Option<Vec<f64>> {
        let mut l = vec![0.0; m * m];
        for i in 0..m {
            for &j in &rows[i] {
                let mut s = h[i * m + j];
                // rows[j] is a subset of rows[i] below j
                for &k in &rows[j] {
                    s -= l[i * m + k] * l[j * m + k];
                }
                l[i * m + j] = s / l[j * m + j];
            }
            let mut d = h[i * m + i] + shift;
            for &k in &rows[i] {
                d -= l[i * m + k] * l[i * m + k];
            }
            if d <= 0.0 || !d.is_finite() {
                return None;
            }
            l[i * m + i] = d.sqrt();
        }
        Some(l)
    }

    // Triangular solves plus refinement against the unshifted matrix.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut x = self.solve_factored(b);
        for _ in 0..3 {
            let r: Vec<f64> = (0..m).map(|i| b[i] - self.h[i * m..(i + 1) * m].iter().zip(&x).map(|(a, v)| a * v).sum::<f64>()).collect();
            let dx = self.solve_factored(&r);
            x.iter_mut().zip(&dx).for_each(|(v, d)| *v += d);
        }
        x
    }

    fn solve_factored(&self, b: &[f64]) -> Vec<f64> {
        let m = self.m;
        let perm = &self.order.perm;
        let mut x: Vec<f64> = perm.iter().map(|&v| b[v]).collect();
        for i in 0..m {
            let mut s = x[i];
            for &k in &self.order.rows[i] {
                s -= self.l[i * m + k] * x[k];
            }
            x[i] = s / self.l[i * m + i];
        }
        for i in (0..m).rev() {
            x[i] /= self.l[i * m + i];
            let xi = x[i];
            for &k in &self.order.rows[i] {
                x[k] -= self.l[i * m + k] * xi;
            }
        }
        let mut out = vec![0.0; m];
        for (p, &v) in perm.iter().enumerate() {
            out[v] = x[p];
        }
        out
    }
}

// Scaled affine product dx~ ds~ for scalar j, with dx~ = dx/g and ds~ = g ds.
fn lp_cross(aff: &Direction, gl: &[f64], j: usize) -> f64 {
    (aff.dxl[j] / gl[j]) * (gl[j] * aff.dsl[j])
}

struct Direction {
    dy: Vec<f64>,
    ds: Vec<SymMatrix>,
    dx: Vec<SymMatrix>,
    // scaled forms for step lengths and the corrector
    ds_t: Vec<SymMatrix>,
    dx_t: Vec<SymMatrix>,
    dsl: Vec<f64>,
    dxl: Vec<f64>,
}

impl Core {
    fn nu(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum::<usize>() + self.scalars.len()
    }

    fn initial_scale(&self) -> (Vec<f64>, Vec<f64>, f64, f64) {
        let mut kx = vec![];
        let mut ks = vec![];
        for b in &self.blocks {
            let d = b.dim as f64;
            let mut zeta: f64 = 10f64.max(d.sqrt());
            let mut eta: f64 = 10f64.max(d.sqrt()).max(b.constant.frobenius_norm());
            for (i, ents) in &b.coeffs {
                let na = frob_sparse(ents);
                zeta = zeta.max(d * (1.0 + self.c[*i].abs()) / (1.0 + na));
                eta = eta.max(na);
            }
            kx.push(zeta);
            ks.push(eta);
        }
        let d = self.scalars.len() as f64;
        let mut zeta: f64 = 10f64.max(d.sqrt());
        let mut eta: f64 = 10f64.max(d.sqrt());
        for s in &self.scalars {
            eta = eta.max(s.constant.abs());
            for &(i, a) in &s.terms {
                zeta = zeta.max((1.0 + self.c[i].abs()) / (1.0 + a.abs()));
                eta = eta.max(a.abs());
            }
        }
        (kx, ks, zeta, eta)
    }

    pub fn solve(&self, cfg: &SolverConfig) -> CoreResult {
        let m = self.m;
        let nu = self.nu() as f64;
        let nb = self.blocks.len();
        let ns = self.scalars.len();
        if nu == 0.0 {
            let unbounded = self.c.iter().any(|&v| v != 0.0);
            return CoreResult {
                status: if unbounded { Status::Unbounded } else { Status::Optimal },
                y: vec![0.0; m],
                x_blocks: vec![],
                x_scalars: vec![],
                pobj: if unbounded { f64::NEG_INFINITY } else { 0.0 },
                dobj: 0.0,
                primal_res: 0.0,
                dual_res: max_abs(&self.c),
                gap: 0.0,
                iterations: 0,
            };
        }

        let groups: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| b.coeffs.iter().map(|(i, _)| *i).collect())
            .chain(self.scalars.iter().map(|a| a.terms.iter().map(|(i, _)| *i).collect()))
            .collect();
        let order = Ordering::new(m, &groups);
        let (kx, ks, kxl, ksl) = self.initial_scale();
        let mut y = vec![0.0; m];
        let mut xb: Vec<SymMatrix> = self.blocks.iter().zip(&kx).map(|(b, k)| SymMatrix::identity(b.dim).scaled(*k)).collect();
        let mut sb: Vec<SymMatrix> = self.blocks.iter().zip(&ks).map(|(b, k)| SymMatrix::identity(b.dim).scaled(*k)).collect();
        let mut xl = vec![kxl; ns];
        let mut sl = vec![ksl; ns];

        let norm_c = max_abs(&self.c);
        let norm_b = self
            .blocks
            .iter()
            .map(|b| b.constant.max_abs())
            .chain(self.scalars.iter().map(|s| s.constant.abs()))
            .fold(0.0, f64::max);
        let x0_norm = kx.iter().copied().chain(std::iter::once(kxl)).fold(0.0, f64::max);

        let mut best: Option<(f64, CoreResult)> = None;
        let mut status = Status::MaxIter;
        let mut iterations = 0;
        let mut stalled = 0;

        for iter in 0..=cfg.max_iterations {
            iterations = iter;
            // residuals
            let rp: Vec<SymMatrix> = self.blocks.iter().zip(&sb).map(|(b, s)| s.sub(&b.eval(&y))).collect();
            let rpl: Vec<f64> = self.scalars.iter().zip(&sl).map(|(a, s)| s - a.eval(&y)).collect();
            let mut rd = self.c.clone();
            for (b, x) in self.blocks.iter().zip(&xb) {
                b.adjoint_into(x, &mut rd, -1.0);
            }
            for (a, x) in self.scalars.iter().zip(&xl) {
                for &(i, v) in &a.terms {
                    rd[i] -= v * x;
                }
            }
            let pobj: f64 = self.c.iter().zip(&y).map(|(a, b)| a * b).sum();
            let dobj: f64 = -self.blocks.iter().zip(&xb).map(|(b, x)| b.constant.dot(x)).sum::<f64>()
                - self.scalars.iter().zip(&xl).map(|(a, x)| a.constant * x).sum::<f64>();
            let gap: f64 = xb.iter().zip(&sb).map(|(x, s)| x.dot(s)).sum::<f64>()
                + xl.iter().zip(&sl).map(|(x, s)| x * s).sum::<f64>();
            let mu = gap / nu;
            let p_abs = rp.iter().map(SymMatrix::max_abs).chain(rpl.iter().map(|v| v.abs())).fold(0.0, f64::max);
            let primal_res = p_abs / (1.0 + norm_b);
            let dual_res = max_abs(&rd) / (1.0 + norm_c);
            let rel_gap = gap.max((pobj - dobj).abs()) / (1.0 + pobj.abs() + dobj.abs());

            let snapshot = |status| CoreResult {
                status,
                y: y.clone(),
                x_blocks: xb.clone(),
                x_scalars: xl.clone(),
                pobj,
                dobj,
                primal_res,
                dual_res,
                gap: rel_gap,
                iterations: iter,
            };
            let merit = primal_res.max(dual_res).max(rel_gap);
            if !merit.is_finite() {
                status = Status::NumericalTrouble;
                break;
            }
            if best.as_ref().is_none_or(|(m, _)| merit < 0.9 * *m) {
                stalled = 0;
            } else {
                stalled += 1;
            }
            if best.as_ref().is_none_or(|(m, _)| merit < *m) {
                best = Some((merit, snapshot(Status::MaxIter)));
            }
            if primal_res <= cfg.tol_residual && dual_res <= cfg.tol_residual && rel_gap <= cfg.tol_gap {
                return snapshot(Status::Optimal);
            }
            if let Some(st) = self.certificate(&y, &xb, &xl, x0_norm, cfg) {
                return snapshot(st);
            }
            // no progress: the best iterate is as good as it gets
            if iter == cfg.max_iterations || stalled >= STALL_ITERATIONS {
                break;
            }

            // scaling
            let mut scal = Vec::with_capacity(nb);
            for (x, s) in xb.iter().zip(&sb) {
                match nt_scaling(x, s) {
                    Some(sc) => scal.push(sc),
                    None => break,
                }
            }
            if scal.len() < nb {
                status = Status::NumericalTrouble;
                break;
            }
            let wl: Vec<f64> = xl.iter().zip(&sl).map(|(x, s)| x / s).collect();
            let gl: Vec<f64> = wl.iter().map(|w| w.sqrt()).collect();
            let dl: Vec<f64> = xl.iter().zip(&sl).map(|(x, s)| (x * s).sqrt()).collect();

            let h = self.schur_matrix(&scal, &wl);
            let Some(fact) = Factor::new(h, m, &order) else {
                status = Status::NumericalTrouble;
                break;
            };

            // predictor
            let rhs_aff: Vec<SymMatrix> = scal.iter().map(|sc| SymMatrix::from_diag(&sc.d.iter().map(|d| -d * d).collect::<Vec<_>>())).collect();
            let rhs_aff_l: Vec<f64> = dl.iter().map(|d| -d * d).collect();
            let aff = self.direction(&fact, &scal, &gl, &dl, &rhs_aff, &rhs_aff_l, &rp, &rpl, &rd);
            let (ap, ad) = self.step_lengths(&scal, &xl, &sl, &aff, 1.0);
            let mut gap_aff = 0.0;
            for k in 0..nb {
                gap_aff += xb[k].add(&aff.dx[k].scaled(ad)).dot(&sb[k].add(&aff.ds[k].scaled(ap)));
            }
            for j in 0..ns {
                gap_aff += (xl[j] + ad * aff.dxl[j]) * (sl[j] + ap * aff.dsl[j]);
            }
            let sigma = ((gap_aff / nu) / mu).clamp(0.0, 1.0).powi(3);

            // corrector
            let rhs: Vec<SymMatrix> = (0..nb)
                .map(|k| {
                    let d = &scal[k].d;
                    let cross = aff.dx_t[k].as_matrix().matmul(aff.ds_t[k].as_matrix()).symmetric_part();
                    SymMatrix::from_fn(d.len(), |i, j| {
                        let base = if i == j { sigma * mu - d[i] * d[i] } else { 0.0 };
                        base - cross.get(i, j)
                    })
                })
                .collect();
            let rhs_l: Vec<f64> = (0..ns).map(|j| sigma * mu - dl[j] * dl[j] - lp_cross(&aff, &gl, j)).collect();
            let dir = self.direction(&fact, &scal, &gl, &dl, &rhs, &rhs_l, &rp, &rpl, &rd);
            let (ap, ad) = self.step_lengths(&scal, &xl, &sl, &dir, cfg.step_fraction);

            for i in 0..m {
                y[i] += ap * dir.dy[i];
            }
            for k in 0..nb {
                sb[k] = sb[k].add(&dir.ds[k].scaled(ap));
                xb[k] = xb[k].add(&dir.dx[k].scaled(ad));
            }
            for j in 0..ns {
                sl[j] += ap * dir.dsl[j];
                xl[j] += ad * dir.dxl[j];
            }
        }

        let mut out = best.map(|b| b.1).expect("at least one iterate evaluated");
        out.status = status;
        out.iterations = iterations;
        out
    }

    fn schur_matrix(&self, scal: &[Scaling], wl: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut h = vec![0.0; m * m];
        for (b, sc) in self.blocks.iter().zip(scal) {
            let n = b.dim;
            let w = &sc.w;
            for (j, ents) in &b.coeffs {
                // T = W A_j W
                let mut t = vec![0.0; n * n];
                for &(k, l, v) in ents {
                    for p in 0..n {
                        let wpk = w.get(p, k);
                        let wpl = w.get(p, l);
                        let row = &mut t[p * n..(p + 1) * n];
                        if k == l {
                            for (q, tq) in row.iter_mut().enumerate() {
                                *tq += v * wpk * w.get(k, q);
                            }
                        } else {
                            for (q, tq) in row.iter_mut().enumerate() {
                                *tq += v * (wpk * w.get(l, q) + wpl * w.get(k, q));
                            }
                        }
                    }
                }
                for (i, ei) in &b.coeffs {
                    if i > j {
                        continue;
                    }
                    let val: f64 = ei
                        .iter()
                        .map(|&(p, q, u)| if p == q { u * t[p * n + p] } else { u * (t[p * n + q] + t[q * n + p]) })
                        .sum();
                    h[i * m + j] += val;
                    if i != j {
                        h[j * m + i] += val;
                    }
                }
            }
        }
        for (a, w) in self.scalars.iter().zip(wl) {
            for &(i, ai) in &a.terms {
                for &(j, aj) in &a.terms {
                    h[i * m + j] += w * ai * aj;
                }
            }
        }
        h
    }

    #[allow(clippy::too_many_arguments)]
    fn direction(
        &self,
        fact: &Factor<'_>,
        scal: &[Scaling],
        gl: &[f64],
        dl: &[f64],
        rhs: &[SymMatrix],
        rhs_l: &[f64],
        rp: &[SymMatrix],
        rpl: &[f64],
        rd: &[f64],
    ) -> Direction {
        let nb = self.blocks.len();
        // M solves D M + M D = 2 Rhs; Rc = G M G^T
        let mut mm = Vec::with_capacity(nb);
        let mut rc = Vec::with_capacity(nb);
        let mut r1: Vec<f64> = rd.iter().map(|v| -v).collect();
        for k in 0..nb {
            let d = &scal[k].d;
            let mk = SymMatrix::from_fn(d.len(), |i, j| 2.0 * rhs[k].get(i, j) / (d[i] + d[j]));
            let g = &scal[k].g;
            let rck = g.matmul(mk.as_matrix()).matmul(&g.transpose()).symmetric_part();
            let wrpw = rp[k].congruence(scal[k].w.as_matrix());
            self.blocks[k].adjoint_into(&rck.add(&wrpw), &mut r1, 1.0);
            mm.push(mk);
            rc.push(rck);
        }
        let ml: Vec<f64> = rhs_l.iter().zip(dl).map(|(r, d)| r / d).collect();
        let rcl: Vec<f64> = ml.iter().zip(gl).map(|(m, g)| m * g).collect();
        for (j, a) in self.scalars.iter().enumerate() {
            let coef = rcl[j] + gl[j] * gl[j] * rpl[j];
            for &(i, v) in &a.terms {
                r1[i] += v * coef;
            }
        }
        let dy = fact.solve(&r1);

        let mut ds = Vec::with_capacity(nb);
        let mut dx = Vec::with_capacity(nb);
        let mut ds_t = Vec::with_capacity(nb);
        let mut dx_t = Vec::with_capacity(nb);
        for k in 0..nb {
            let dsk = self.blocks[k].apply(&dy).sub(&rp[k]);
            let g = &scal[k].g;
            let dst = dsk.congruence_t(g);
            let dxt = mm[k].sub(&dst);
            let dxk = rc[k].sub(&dsk.congruence(scal[k].w.as_matrix()));
            ds.push(dsk);
            dx.push(dxk);
            ds_t.push(dst);
            dx_t.push(dxt);
        }
        let dsl: Vec<f64> = self.scalars.iter().zip(rpl).map(|(a, r)| a.apply(&dy) - r).collect();
        let dxl: Vec<f64> = (0..self.scalars.len()).map(|j| rcl[j] - gl[j] * gl[j] * dsl[j]).collect();
        Direction { dy, ds, dx, ds_t, dx_t, dsl, dxl }
    }

    fn step_lengths(&self, scal: &[Scaling], xl: &[f64], sl: &[f64], dir: &Direction, fraction: f64) -> (f64, f64) {
        let mut ap = max_step_lp(sl, &dir.dsl);
        let mut ad = max_step_lp(xl, &dir.dxl);
        for (k, sc) in scal.iter().enumerate() {
            ap = ap.min(max_step_psd(&sc.d, &dir.ds_t[k]));
            ad = ad.min(max_step_psd(&sc.d, &dir.dx_t[k]));
        }
        ((fraction * ap).min(1.0), (fraction * ad).min(1.0))
    }

    fn certificate(&self, y: &[f64], xb: &[SymMatrix], xl: &[f64], x0: f64, cfg: &SolverConfig) -> Option<Status> {
        let growth = cfg.infeasibility_growth;
        // dual ray: A^*(X) + sum x a ~ 0 with -<C,X> - x.a0 > 0
        let nx: f64 = xb.iter().map(|x| x.max_abs()).chain(xl.iter().map(|v| v.abs())).fold(0.0, f64::max);
        if nx > growth * (1.0 + x0) {
            let mut ax = vec![0.0; self.m];
            for (b, x) in self.blocks.iter().zip(xb) {
                b.adjoint_into(x, &mut ax, 1.0);
            }
            for (a, x) in self.scalars.iter().zip(xl) {
                for &(i, v) in &a.terms {
                    ax[i] += v * x;
                }
            }
            let tau = -self.blocks.iter().zip(xb).map(|(b, x)| b.constant.dot(x)).sum::<f64>()
                - self.scalars.iter().zip(xl).map(|(a, x)| a.constant * x).sum::<f64>();
            if tau > 0.0 && max_abs(&ax) <= 1e-6 * tau {
                return Some(Status::Infeasible);
            }
        }
        // primal ray: A(d) ⪰ 0, a.d >= 0, c.d < 0
        let ny = max_abs(y);
        if ny > growth {
            let d: Vec<f64> = y.iter().map(|v| v / ny).collect();
            let cd: f64 = self.c.iter().zip(&d).map(|(a, b)| a * b).sum();
            if cd < -1e-6 * (1.0 + max_abs(&self.c)) {
                let lmin = self
                    .blocks
                    .iter()
                    .map(|b| crate::symlin::eigvals_sym(&b.apply(&d)).ok().and_then(|v| v.last().copied()).unwrap_or(f64::NEG_INFINITY))
                    .chain(self.scalars.iter().map(|a| a.apply(&d)))
                    .fold(f64::INFINITY, f64::min);
                if lmin >= -1e-6 * cd.abs() {
                    return Some(Status::Unbounded);
                }
            }
        }
        None
    }
}
