use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{solve, SdpProblem, Sense, SolveReport, SolverConfig, Status};
use crate::error::{arg, Result};
use crate::lmi::{AffineMatrixMap, AffineScalar, SdpRepresentation, SymExpr};
use crate::symlin::eigvals_sym;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarginReport {
    /// Largest `t <= 1` with every block `⪰ tI` and every scalar `>= t`,
    /// replayed at the returned point.
    pub margin: f64,
    pub report: SolveReport,
}

fn shifted(p: &SdpProblem, shift: &AffineScalar) -> (Vec<AffineMatrixMap>, Vec<AffineScalar>) {
    let blocks = p
        .psd_blocks
        .iter()
        .map(|b| {
            let mut e = b.to_expr();
            e = e.sub(&SymExpr::identity_times(b.dim, shift));
            AffineMatrixMap::from_expr(&e)
        })
        .collect();
    let scalars = p.nonneg_scalars.iter().map(|s| s.sub(shift)).collect();
    (blocks, scalars)
}

/// `t*` of `max t` over the shifted constraints; the objective of `p` is ignored.
pub fn feasibility_margin_report(p: &SdpProblem, cfg: &SolverConfig) -> Result<MarginReport> {
    let t = p.n_vars;
    let tvar = AffineScalar::var(t);
    let (blocks, mut scalars) = shifted(p, &tvar);
    scalars.push(AffineScalar::from_terms(1.0, [(t, -1.0)]));
    let q = SdpProblem {
        n_vars: t + 1,
        objective: tvar,
        sense: Sense::Max,
        psd_blocks: blocks,
        nonneg_scalars: scalars,
        equalities: p.equalities.clone(),
    };
    let mut report = solve(&q, cfg)?;
    let margin = if report.status == Status::Infeasible {
        f64::NEG_INFINITY
    } else {
        let y = &report.primal_point[..t];
        let mut m: f64 = 1.0;
        for b in &p.psd_blocks {
            m = m.min(eigvals_sym(&b.eval(y))?.last().copied().unwrap_or(f64::INFINITY));
        }
        for s in &p.nonneg_scalars {
            m = m.min(s.eval(y));
        }
        m
    };
    report.primal_point.truncate(t);
    Ok(MarginReport { margin, report })
}

pub fn feasibility_margin(p: &SdpProblem, cfg: &SolverConfig) -> Result<f64> {
    Ok(feasibility_margin_report(p, cfg)?.margin)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualMembership {
    /// Weighted distance from `w` to the output of the returned lifted point.
    pub residual: f64,
    pub threshold: f64,
    pub accepted: bool,
    /// Constraint violation of the lifted point (should be tiny).
    pub violation: f64,
    pub report: SolveReport,
}

/// Decide `w ∈ image(rep)` by minimizing `‖weights ∘ (out(v) - w)‖` over the
/// lifted constraints. `weights` makes the norm match the interface geometry
/// (e.g. `sqrt 2` on packed off-diagonals).
pub fn dual_membership(
    rep: &SdpRepresentation,
    w: &[f64],
    weights: Option<&[f64]>,
    rel_tol: f64,
    cfg: &SolverConfig,
) -> Result<DualMembership> {
    let d = rep.primal_dim();
    if w.len() != d {
        return arg(format!("point has dimension {}, expected {d}", w.len()));
    }
    let ones = vec![1.0; d];
    let wt = weights.unwrap_or(&ones);
    let out = rep.interface();
    let mut p = rep.to_problem();
    let s = AffineScalar::var(p.n_vars);
    p.n_vars += 1;
    let u: Vec<AffineScalar> = (0..d).map(|i| out[i].sub(&AffineScalar::constant(w[i])).scaled(wt[i])).collect();
    let arrow = SymExpr::from_fn(d + 1, |i, j| {
        if i == j {
            s.clone()
        } else if j == d {
            u[i].clone()
        } else {
            AffineScalar::default()
        }
    });
    if d == 0 {
        p.nonneg_scalars.push(s.clone());
    } else {
        p.psd_blocks.push(AffineMatrixMap::from_expr(&arrow));
    }
    p.objective = s;
    let mut report = solve(&p, cfg)?;
    let wnorm = w.iter().zip(wt).map(|(a, b)| (a * b).powi(2)).sum::<f64>().sqrt();
    let threshold = rel_tol * (1.0 + wnorm);
    if report.status == Status::Infeasible {
        return Ok(DualMembership { residual: f64::INFINITY, threshold, accepted: false, violation: 0.0, report });
    }
    report.primal_point.truncate(rep.n_vars());
    let y = &report.primal_point;
    let residual = u.iter().map(|e| e.eval(y).powi(2)).sum::<f64>().sqrt();
    let violation = rep.max_violation(y)?;
    Ok(DualMembership { residual, threshold, accepted: residual <= threshold, violation, report })
}

/// Points of `image(rep)` obtained by minimizing random linear functionals
/// over the lifted set tightened by `delta` (blocks `⪰ delta I`, scalars
/// `>= delta`) and normalized by `<normal, out> = 1`. Each returned point is
/// therefore strictly inside the lifted feasible set. When the tightened set
/// is empty the untightened one is used instead.
pub fn sample_members<R: Rng>(
    rep: &SdpRepresentation,
    count: usize,
    normal: &[f64],
    delta: f64,
    rng: &mut R,
    cfg: &SolverConfig,
) -> Result<Vec<Vec<f64>>> {
    let d = rep.primal_dim();
    if normal.len() != d {
        return arg("normalization vector has the wrong dimension");
    }
    let out = rep.interface();
    let base = rep.to_problem();
    let (mut blocks, mut scalars) = shifted(&base, &AffineScalar::constant(delta));
    let norm_eq = crate::lmi::sum_exprs(out.iter().zip(normal).map(|(o, &a)| o.scaled(a)).collect::<Vec<_>>().iter())
        .sub(&AffineScalar::constant(1.0));
    let mut equalities = base.equalities.clone();
    equalities.push(norm_eq);
    let mut tightened = delta > 0.0;
    let mut samples = vec![];
    let mut attempts = 0;
    while samples.len() < count && attempts < 3 * count + 3 {
        attempts += 1;
        let r: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let objective = crate::lmi::sum_exprs(out.iter().zip(&r).map(|(o, &a)| o.scaled(a)).collect::<Vec<_>>().iter());
        let p = SdpProblem {
            n_vars: base.n_vars,
            objective,
            sense: Sense::Min,
            psd_blocks: blocks.clone(),
            nonneg_scalars: scalars.clone(),
            equalities: equalities.clone(),
        };
        let rep_ = solve(&p, cfg)?;
        match rep_.status {
            Status::Optimal => samples.push(out.iter().map(|o| o.eval(&rep_.primal_point)).collect()),
            // lifts without interior points (e.g. a ray written through SH_n)
            Status::Infeasible if tightened => {
                (blocks, scalars) = (base.psd_blocks.clone(), base.nonneg_scalars.clone());
                tightened = false;
            }
            _ => {}
        }
    }
    Ok(samples)
}

/// Optimize `<c, x>` over `x` in the cone of `rep` intersected with
/// `{x : <a_i, x> = b_i}`.
pub fn cone_program(
    rep: &SdpRepresentation,
    c: &[f64],
    sense: Sense,
    equalities: &[(Vec<f64>, f64)],
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    let d = rep.primal_dim();
    if c.len() != d || equalities.iter().any(|(a, _)| a.len() != d) {
        return arg(format!("objective and equality rows must have dimension {d}"));
    }
    let out = rep.interface();
    let lin = |a: &[f64], b: f64| {
        let mut e = AffineScalar::constant(-b);
        for (o, &ai) in out.iter().zip(a) {
            if ai != 0.0 {
                e.add_scaled(o, ai);
            }
        }
        e
    };
    let mut p = rep.to_problem();
    p.objective = lin(c, 0.0);
    p.sense = sense;
    p.equalities.extend(equalities.iter().map(|(a, b)| lin(a, *b)));
    solve(&p, cfg)
}

pub fn solve_file(path: &Path, cfg: &SolverConfig) -> Result<SolveReport> {
    let text = std::fs::read_to_string(path)?;
    let p = crate::lmi::sdpa::from_sdpa(&text)?;
    solve(&p, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn halfspace() -> SdpRepresentation {
        let mut r = SdpRepresentation::new(1);
        r.add_nonneg(AffineScalar::var(0));
        r
    }

    #[test]
    fn margin_cases() {
        let cfg = SolverConfig::default();
        let empty = SdpRepresentation::new(2).freeze_membership_problem(&[0.0, 0.0]).unwrap();
        assert!((feasibility_margin(&empty, &cfg).unwrap() - 1.0).abs() < 1e-7);
        let p = halfspace().freeze_membership_problem(&[-1.0]).unwrap();
        assert!((feasibility_margin(&p, &cfg).unwrap() + 1.0).abs() < 1e-7);
        let p = halfspace().freeze_membership_problem(&[0.25]).unwrap();
        assert!((feasibility_margin(&p, &cfg).unwrap() - 0.25).abs() < 1e-7);
    }

    #[test]
    fn ray_membership() {
        let cfg = SolverConfig::default();
        let mut ray = SdpRepresentation::new_projection(2);
        let t = ray.fresh_vec(1).remove(0);
        ray.add_nonneg(t.clone());
        ray.set_output(vec![t.clone(), t]).unwrap();
        assert!(dual_membership(&ray, &[2.0, 2.0], None, 1e-7, &cfg).unwrap().accepted);
        let far = dual_membership(&ray, &[1.0, -1.0], None, 1e-7, &cfg).unwrap();
        assert!(!far.accepted);
        assert!((far.residual - 2f64.sqrt()).abs() < 1e-6);
    }
}
