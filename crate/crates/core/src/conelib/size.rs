//! Representation sizes by arithmetic on the recursion, without building
//! anything. Size is the sum of PSD block dimensions, scalar constraints
//! counting one each.

use serde::Serialize;

use super::{orthant_step, psd_step, ConeKind, ConeSpec, OrthantStep, PsdStep, Strategy};
use crate::error::Result;
use crate::symlin::svec_len;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeRow {
    pub depth: usize,
    pub cone: String,
    pub construction: String,
    /// Constraints added at this level.
    pub own: usize,
    /// Own plus everything below.
    pub subtotal: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub cone: String,
    pub strategy: Strategy,
    pub rows: Vec<SizeRow>,
    pub total: usize,
}

/// `(n-1)` order scalars, the block `z_1 I - X`, and for each `l = 2..n-1`
/// two blocks plus one scalar.
pub(crate) fn schur_horn_size(n: usize) -> usize {
    if n <= 1 {
        return n;
    }
    (n - 1) + n + (n - 2) * (2 * n + 1)
}

struct Walker {
    dual: bool,
    strategy: Strategy,
    rows: Vec<SizeRow>,
}

impl Walker {
    fn push(&mut self, depth: usize, cone: String, construction: &str, own: usize) -> usize {
        let star = if self.dual { "*" } else { "" };
        self.rows.push(SizeRow { depth, cone: format!("{cone}{star}"), construction: construction.into(), own, subtotal: own });
        self.rows.len() - 1
    }

    fn finish(&mut self, row: usize, below: usize) -> usize {
        self.rows[row].subtotal += below;
        self.rows[row].subtotal
    }

    fn orthant(&mut self, n: usize, k: usize, depth: usize) -> Result<usize> {
        let label = format!("orthant({n},{k})");
        Ok(match orthant_step(n, k, self.strategy)? {
            OrthantStep::Free => {
                let r = self.push(depth, label, if self.dual { "zero" } else { "free" }, 0);
                self.finish(r, 0)
            }
            OrthantStep::Scalars => {
                let r = self.push(depth, label, "nonnegative scalars", n);
                self.finish(r, 0)
            }
            OrthantStep::Deriv => {
                let r = self.push(depth, label, "derivative step", 0);
                let below = self.psd(n - 1, k - 1, depth + 1)?;
                self.finish(r, below)
            }
            OrthantStep::Polar => {
                let r = self.push(depth, label, "polar step", n);
                let below = self.psd(n - 1, k, depth + 1)?;
                self.finish(r, below)
            }
            OrthantStep::Soc => {
                let r = self.push(depth, label, "second-order cone", n + 1);
                self.finish(r, 0)
            }
        })
    }

    fn psd(&mut self, n: usize, k: usize, depth: usize) -> Result<usize> {
        let label = format!("psd({n},{k})");
        Ok(match psd_step(n, k, self.strategy)? {
            PsdStep::Free => {
                let r = self.push(depth, label, if self.dual { "zero" } else { "free" }, 0);
                self.finish(r, 0)
            }
            PsdStep::Block => {
                let r = self.push(depth, label, "PSD block", n);
                self.finish(r, 0)
            }
            PsdStep::Trace => {
                let r = self.push(depth, label, if self.dual { "ray of the identity" } else { "trace halfspace" }, 1);
                self.finish(r, 0)
            }
            PsdStep::Soc => {
                let r = self.push(depth, label, "second-order cone", svec_len(n) + 1);
                self.finish(r, 0)
            }
            PsdStep::SchurHorn => {
                let r = self.push(depth, label, "Schur-Horn", schur_horn_size(n));
                let below = self.orthant(n, k, depth + 1)?;
                self.finish(r, below)
            }
        })
    }
}

pub fn size_report(spec: &ConeSpec) -> Result<SizeReport> {
    spec.validate()?;
    let (inner, dual) = match &spec.kind {
        ConeKind::Dual(inner) => match &inner.kind {
            ConeKind::Dual(x) => (x.as_ref(), false),
            _ => (inner.as_ref(), true),
        },
        _ => (spec, false),
    };
    let mut w = Walker { dual, strategy: inner.strategy, rows: vec![] };
    let total = match &inner.kind {
        ConeKind::Orthant { n, k } => w.orthant(*n, *k, 0)?,
        ConeKind::PsdDeriv { n, k } => w.psd(*n, *k, 0)?,
        ConeKind::Spectrahedral { pencil, k } => w.psd(pencil.m(), *k, 0)?,
        ConeKind::Dual(_) => return size_report(inner),
    };
    Ok(SizeReport { cone: spec.label(), strategy: inner.strategy, rows: w.rows, total })
}

pub fn size_of(spec: &ConeSpec) -> Result<usize> {
    Ok(size_report(spec)?.total)
}

impl std::fmt::Display for SizeReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{} [{}]: total size {}", self.cone, self.strategy.name(), self.total)?;
        for r in &self.rows {
            let pad = "  ".repeat(r.depth + 1);
            writeln!(f, "{pad}{:<16} {:<20} own {:>5}  subtotal {:>6}", r.cone, r.construction, r.own, r.subtotal)?;
        }
        Ok(())
    }
}
