//! Dense primal-dual interior-point solver for block-diagonal LMI problems.
//!
//! A problem is `min/max objective(y)` over `y` in `R^n_vars` subject to
//! `F_b(y) ⪰ 0` for each block, scalar constraints `s_j(y) >= 0` and affine
//! equalities `g(y) = 0`. Equalities are eliminated up front by pivoted
//! substitution, so the iteration itself only sees inequalities.

mod drivers;
mod ipm;

use serde::{Deserialize, Serialize};

pub use drivers::{
    cone_program, dual_membership, feasibility_margin, feasibility_margin_report, sample_members, solve_file,
    DualMembership, MarginReport,
};

use crate::error::{arg, Result};
use crate::lmi::{AffineMatrixMap, AffineScalar};
use crate::symlin::SymMatrix;
use ipm::{Core, CoreBlock, CoreScalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    #[default]
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SdpProblem {
    pub n_vars: usize,
    pub objective: AffineScalar,
    pub sense: Sense,
    pub psd_blocks: Vec<AffineMatrixMap>,
    pub nonneg_scalars: Vec<AffineScalar>,
    pub equalities: Vec<AffineScalar>,
}

impl SdpProblem {
    fn check(&self) -> Result<()> {
        let n = self.n_vars;
        let bad = self
            .psd_blocks
            .iter()
            .filter_map(AffineMatrixMap::max_var)
            .chain(
                self.nonneg_scalars
                    .iter()
                    .chain(&self.equalities)
                    .chain(std::iter::once(&self.objective))
                    .filter_map(AffineScalar::max_var),
            )
            .any(|v| v >= n);
        if bad {
            return arg(format!("problem references a variable index >= {n}"));
        }
        Ok(())
    }

    /// Largest violation at `y`: negative block eigenvalues, negative scalars,
    /// equality residuals.
    pub fn max_violation(&self, y: &[f64]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for b in &self.psd_blocks {
            let l = crate::symlin::eigvals_sym(&b.eval(y))?;
            worst = worst.max(-l.last().copied().unwrap_or(0.0));
        }
        for s in &self.nonneg_scalars {
            worst = worst.max(-s.eval(y));
        }
        for e in &self.equalities {
            worst = worst.max(e.eval(y).abs());
        }
        Ok(worst)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub max_iterations: usize,
    pub tol_residual: f64,
    pub tol_gap: f64,
    pub step_fraction: f64,
    pub infeasibility_growth: f64,
    /// Constant left over after eliminating a redundant equality.
    pub tol_equality: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            tol_residual: 1e-8,
            tol_gap: 1e-8,
            step_fraction: 0.98,
            infeasibility_growth: 1e8,
            tol_equality: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIter,
    NumericalTrouble,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: Status,
    pub objective_value: f64,
    pub dual_objective: f64,
    pub primal_point: Vec<f64>,
    /// Multipliers for `psd_blocks`, in order.
    pub dual_blocks: Vec<SymMatrix>,
    /// Multipliers for `nonneg_scalars`, in order.
    pub dual_scalars: Vec<f64>,
    pub complementarity: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
}

// Result of eliminating equalities: original variable i equals back[i]
// evaluated at the reduced vector.
struct Reduced {
    core: Core,
    back: Vec<AffineScalar>,
    // indices into psd_blocks / nonneg_scalars kept as core blocks; constant
    // ones are checked directly
    block_ids: Vec<usize>,
    scalar_ids: Vec<usize>,
    objective_constant: f64,
    sign: f64,
}

enum Reduction {
    Ready(Reduced),
    Infeasible,
    Unbounded(Vec<f64>),
}

fn eliminate(p: &SdpProblem, cfg: &SolverConfig) -> Reduction {
    let n = p.n_vars;
    let mut elim: Vec<Option<AffineScalar>> = vec![None; n];
    let ident: Vec<AffineScalar> = (0..n).map(AffineScalar::var).collect();
    for e in &p.equalities {
        let scale = e.terms.iter().fold(e.constant.abs(), |m, t| m.max(t.1.abs()));
        let map: Vec<AffineScalar> = (0..n).map(|v| elim[v].clone().unwrap_or_else(|| ident[v].clone())).collect();
        let mut r = e.substitute(&map);
        let cut = 1e-14 * scale.max(1.0);
        r.terms.retain(|t| t.1.abs() > cut);
        let Some(&(piv, cp)) = r.terms.iter().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())) else {
            if r.constant.abs() > cfg.tol_equality * (1.0 + scale) {
                return Reduction::Infeasible;
            }
            continue;
        };
        let expr = AffineScalar::from_terms(
            -r.constant / cp,
            r.terms.iter().filter(|t| t.0 != piv).map(|&(v, c)| (v, -c / cp)),
        );
        let mut sub = ident.clone();
        sub[piv] = expr.clone();
        for slot in elim.iter_mut().flatten() {
            if slot.terms.iter().any(|t| t.0 == piv) {
                *slot = slot.substitute(&sub);
            }
        }
        elim[piv] = Some(expr);
    }
    let map: Vec<AffineScalar> = (0..n).map(|v| elim[v].clone().unwrap_or_else(|| ident[v].clone())).collect();

    let blocks: Vec<AffineMatrixMap> = p.psd_blocks.iter().map(|b| b.substitute(&map)).collect();
    let scalars: Vec<AffineScalar> = p.nonneg_scalars.iter().map(|s| s.substitute(&map)).collect();
    let sign = if p.sense == Sense::Max { -1.0 } else { 1.0 };
    let objective_full = p.objective.substitute(&map);
    let objective = objective_full.scaled(sign);

    let mut used = vec![false; n];
    for b in &blocks {
        for (v, _) in &b.coeffs {
            used[*v] = true;
        }
    }
    for s in &scalars {
        for &(v, _) in &s.terms {
            used[v] = true;
        }
    }
    // constant constraints are decided here
    let mut block_ids = vec![];
    let mut scalar_ids = vec![];
    for (k, b) in blocks.iter().enumerate() {
        if b.coeffs.is_empty() {
            let l = crate::symlin::eigvals_sym(&b.constant.to_dense()).unwrap_or_default();
            if l.last().copied().unwrap_or(0.0) < -cfg.tol_equality * (1.0 + b.constant.max_abs()) {
                return Reduction::Infeasible;
            }
        } else {
            block_ids.push(k);
        }
    }
    for (k, s) in scalars.iter().enumerate() {
        if s.terms.is_empty() {
            if s.constant < -cfg.tol_equality * (1.0 + s.constant.abs()) {
                return Reduction::Infeasible;
            }
        } else {
            scalar_ids.push(k);
        }
    }
    if objective.terms.iter().any(|t| !used[t.0]) {
        // a free direction decreases the objective without limit
        let mut ray = vec![0.0; n];
        for &(v, c) in &objective.terms {
            if !used[v] {
                ray[v] = -c.signum();
            }
        }
        let ray_full = map.iter().map(|e| e.eval(&ray) - e.constant).collect();
        return Reduction::Unbounded(ray_full);
    }

    let mut index = vec![usize::MAX; n];
    let mut m = 0;
    for v in 0..n {
        if used[v] {
            index[v] = m;
            m += 1;
        }
    }
    let mut c = vec![0.0; m];
    for &(v, coef) in &objective.terms {
        c[index[v]] += coef;
    }
    let core = Core {
        m,
        c,
        blocks: block_ids
            .iter()
            .map(|&k| {
                let b = &blocks[k];
                CoreBlock {
                    dim: b.dim,
                    constant: b.constant.to_dense(),
                    coeffs: b.coeffs.iter().map(|(v, s)| (index[*v], s.entries.clone())).collect(),
                }
            })
            .collect(),
        scalars: scalar_ids
            .iter()
            .map(|&k| CoreScalar {
                constant: scalars[k].constant,
                terms: scalars[k].terms.iter().map(|&(v, a)| (index[v], a)).collect(),
            })
            .collect(),
    };
    // unused free variables are set to zero
    let to_reduced: Vec<AffineScalar> =
        (0..n).map(|v| if used[v] { AffineScalar::var(index[v]) } else { AffineScalar::default() }).collect();
    let back = map.iter().map(|e| e.substitute(&to_reduced)).collect();
    Reduction::Ready(Reduced {
        core,
        back,
        block_ids,
        scalar_ids,
        objective_constant: objective_full.constant,
        sign,
    })
}

fn unsolved(p: &SdpProblem, status: Status) -> SolveReport {
    let value = match status {
        Status::Infeasible => f64::INFINITY,
        Status::Unbounded => f64::NEG_INFINITY,
        _ => f64::NAN,
    };
    let sign = if p.sense == Sense::Max { -1.0 } else { 1.0 };
    SolveReport {
        status,
        objective_value: sign * value,
        dual_objective: sign * value,
        primal_point: vec![0.0; p.n_vars],
        dual_blocks: p.psd_blocks.iter().map(|b| SymMatrix::zeros(b.dim)).collect(),
        dual_scalars: vec![0.0; p.nonneg_scalars.len()],
        complementarity: 0.0,
        primal_residual: 0.0,
        dual_residual: 0.0,
        iterations: 0,
    }
}

pub fn solve(p: &SdpProblem, cfg: &SolverConfig) -> Result<SolveReport> {
    p.check()?;
    let red = match eliminate(p, cfg) {
        Reduction::Ready(r) => r,
        Reduction::Infeasible => return Ok(unsolved(p, Status::Infeasible)),
        Reduction::Unbounded(ray) => {
            let mut rep = unsolved(p, Status::Unbounded);
            rep.primal_point = ray;
            return Ok(rep);
        }
    };
    let res = red.core.solve(cfg);
    let y: Vec<f64> = red.back.iter().map(|e| e.eval(&res.y)).collect();
    let mut dual_blocks: Vec<SymMatrix> = p.psd_blocks.iter().map(|b| SymMatrix::zeros(b.dim)).collect();
    for (k, x) in red.block_ids.iter().zip(res.x_blocks) {
        dual_blocks[*k] = x;
    }
    let mut dual_scalars = vec![0.0; p.nonneg_scalars.len()];
    for (k, x) in red.scalar_ids.iter().zip(res.x_scalars) {
        dual_scalars[*k] = x;
    }
    let (pobj, dobj) = match res.status {
        Status::Infeasible => (f64::INFINITY, res.dobj),
        Status::Unbounded => (f64::NEG_INFINITY, res.pobj),
        _ => (res.pobj, res.dobj),
    };
    Ok(SolveReport {
        status: res.status,
        objective_value: red.sign * pobj + red.objective_constant,
        dual_objective: red.sign * dobj + red.objective_constant,
        primal_point: y,
        dual_blocks,
        dual_scalars,
        complementarity: res.gap,
        primal_residual: res.primal_res,
        dual_residual: res.dual_res,
        iterations: res.iterations,
    })
}
