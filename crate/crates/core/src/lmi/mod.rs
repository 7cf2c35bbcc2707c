//! Affine-LMI data model.
//!
//! Every variable is an index into one flat vector. A matrix variable
//! `X` in `S^n` occupies `n(n+1)/2` consecutive slots in packed upper-triangle
//! order (row-major, see [`crate::symlin::svec_index`]), off-diagonals
//! unscaled: slot `(i,j)` holds `X_ij`.
//!
//! A representation is either slice-form (the first `primal_dim` variables
//! are the point itself) or projection-form (`output_map` gives the point as
//! an affine function of the auxiliary variables; the first `primal_dim`
//! slots are then reserved but unused).

mod expr;
pub mod json;
pub mod sdpa;

use std::ops::Range;

pub use expr::{sum_exprs, AffineMatrixMap, AffineScalar, SparseSym, SymExpr};

use crate::error::{arg, Error, Result};
use crate::sdpsolve::{Sense, SdpProblem};
use crate::symlin::svec_len;

#[derive(Debug, Clone, PartialEq)]
pub struct SdpRepresentation {
    primal_dim: usize,
    aux_dim: usize,
    psd_blocks: Vec<AffineMatrixMap>,
    nonneg_scalars: Vec<AffineScalar>,
    equalities: Vec<AffineScalar>,
    output_map: Option<Vec<AffineScalar>>,
}

impl SdpRepresentation {
    /// Empty slice-form representation of all of `R^primal_dim`.
    pub fn new(primal_dim: usize) -> Self {
        Self {
            primal_dim,
            aux_dim: 0,
            psd_blocks: vec![],
            nonneg_scalars: vec![],
            equalities: vec![],
            output_map: None,
        }
    }

    /// Projection-form representation; the output starts as the zero map and
    /// must be set with [`Self::set_output`].
    pub fn new_projection(primal_dim: usize) -> Self {
        Self { output_map: Some(vec![AffineScalar::default(); primal_dim]), ..Self::new(primal_dim) }
    }

    pub(crate) fn from_parts(
        primal_dim: usize,
        aux_dim: usize,
        psd_blocks: Vec<AffineMatrixMap>,
        nonneg_scalars: Vec<AffineScalar>,
        equalities: Vec<AffineScalar>,
        output_map: Option<Vec<AffineScalar>>,
    ) -> Result<Self> {
        let rep = Self { primal_dim, aux_dim, psd_blocks, nonneg_scalars, equalities, output_map };
        rep.validate()?;
        Ok(rep)
    }

    fn validate(&self) -> Result<()> {
        let nv = self.n_vars();
        let max_var = self
            .psd_blocks
            .iter()
            .filter_map(AffineMatrixMap::max_var)
            .chain(self.nonneg_scalars.iter().chain(&self.equalities).filter_map(AffineScalar::max_var))
            .chain(self.output_map.iter().flatten().filter_map(AffineScalar::max_var))
            .max();
        if let Some(v) = max_var {
            if v >= nv {
                return arg(format!("variable index {v} out of range for {nv} variables"));
            }
        }
        for b in &self.psd_blocks {
            if b.dim < 2 {
                return arg("PSD blocks must have dimension >= 2; use scalar constraints");
            }
            let bad = |m: &SparseSym| m.dim != b.dim || m.entries.iter().any(|&(i, j, _)| i > j || j >= b.dim);
            if bad(&b.constant) || b.coeffs.iter().any(|(_, m)| bad(m)) {
                return arg("block entry outside its declared dimension");
            }
        }
        if let Some(out) = &self.output_map {
            if out.len() != self.primal_dim {
                return arg("output map length must equal primal_dim");
            }
        }
        Ok(())
    }

    pub fn primal_dim(&self) -> usize {
        self.primal_dim
    }

    pub fn aux_dim(&self) -> usize {
        self.aux_dim
    }

    pub fn n_vars(&self) -> usize {
        self.primal_dim + self.aux_dim
    }

    pub fn psd_blocks(&self) -> &[AffineMatrixMap] {
        &self.psd_blocks
    }

    pub fn nonneg_scalars(&self) -> &[AffineScalar] {
        &self.nonneg_scalars
    }

    pub fn equalities(&self) -> &[AffineScalar] {
        &self.equalities
    }

    pub fn output_map(&self) -> Option<&[AffineScalar]> {
        self.output_map.as_deref()
    }

    pub fn is_projection(&self) -> bool {
        self.output_map.is_some()
    }

    /// Sum of block dimensions, scalars counting one each.
    pub fn size(&self) -> usize {
        self.psd_blocks.iter().map(|b| b.dim).sum::<usize>() + self.nonneg_scalars.len()
    }

    /// The represented point as affine expressions in this representation's
    /// own variables.
    pub fn interface(&self) -> Vec<AffineScalar> {
        match &self.output_map {
            Some(out) => out.clone(),
            None => (0..self.primal_dim).map(AffineScalar::var).collect(),
        }
    }

    /// Interface variables of a slice-form representation viewed as `S^n`.
    pub fn interface_sym(&self, n: usize, offset: usize) -> SymExpr {
        SymExpr::from_svec(n, (offset..offset + svec_len(n)).map(AffineScalar::var).collect())
    }

    pub fn fresh_vars(&mut self, count: usize) -> Range<usize> {
        let start = self.n_vars();
        self.aux_dim += count;
        start..start + count
    }

    pub fn fresh_vec(&mut self, count: usize) -> Vec<AffineScalar> {
        self.fresh_vars(count).map(AffineScalar::var).collect()
    }

    pub fn fresh_sym(&mut self, n: usize) -> SymExpr {
        let r = self.fresh_vars(svec_len(n));
        SymExpr::from_svec(n, r.map(AffineScalar::var).collect())
    }

    /// `M ⪰ 0`. Size-1 matrices become scalar constraints, size 0 is dropped.
    pub fn add_psd(&mut self, m: &SymExpr) {
        match m.dim() {
            0 => {}
            1 => self.nonneg_scalars.push(m.get(0, 0).clone()),
            _ => self.psd_blocks.push(AffineMatrixMap::from_expr(m)),
        }
    }

    pub fn add_nonneg(&mut self, s: AffineScalar) {
        self.nonneg_scalars.push(s);
    }

    pub fn add_equality(&mut self, s: AffineScalar) {
        self.equalities.push(s);
    }

    pub fn set_output(&mut self, out: Vec<AffineScalar>) -> Result<()> {
        if out.len() != self.primal_dim {
            return arg(format!("output map has {} entries, expected {}", out.len(), self.primal_dim));
        }
        self.output_map = Some(out);
        Ok(())
    }

    /// Constrain `image` (expressions in this representation's variables) to
    /// lie in `cone`.
    pub fn embed(&mut self, cone: &SdpRepresentation, image: &[AffineScalar]) -> Result<()> {
        if image.len() != cone.primal_dim {
            return arg(format!("image has dimension {}, cone expects {}", image.len(), cone.primal_dim));
        }
        match &cone.output_map {
            None => {
                let mut map = image.to_vec();
                map.extend(self.fresh_vec(cone.aux_dim));
                self.append_substituted(cone, &map);
            }
            Some(out) => {
                let map = self.projection_map(cone);
                self.append_substituted(cone, &map);
                for (target, o) in image.iter().zip(out) {
                    self.equalities.push(target.sub(&o.substitute(&map)));
                }
            }
        }
        Ok(())
    }

    /// Add a fresh copy of `cone` and return its point as expressions in this
    /// representation's variables.
    pub fn embed_output(&mut self, cone: &SdpRepresentation) -> Vec<AffineScalar> {
        match &cone.output_map {
            None => {
                let map = self.fresh_vec(cone.n_vars());
                self.append_substituted(cone, &map);
                map[..cone.primal_dim].to_vec()
            }
            Some(out) => {
                let map = self.projection_map(cone);
                self.append_substituted(cone, &map);
                out.iter().map(|o| o.substitute(&map)).collect()
            }
        }
    }

    // Interface slots of a projection-form cone are unused; map them to zero.
    fn projection_map(&mut self, cone: &SdpRepresentation) -> Vec<AffineScalar> {
        let mut map = vec![AffineScalar::default(); cone.primal_dim];
        map.extend(self.fresh_vec(cone.aux_dim));
        map
    }

    fn append_substituted(&mut self, cone: &SdpRepresentation, map: &[AffineScalar]) {
        self.psd_blocks.extend(cone.psd_blocks.iter().map(|b| b.substitute(map)));
        self.nonneg_scalars.extend(cone.nonneg_scalars.iter().map(|s| s.substitute(map)));
        self.equalities.extend(cone.equalities.iter().map(|s| s.substitute(map)));
    }

    /// Fix the interface to `point`, leaving a feasibility problem in the
    /// auxiliary variables (renumbered from 0).
    pub fn freeze_membership_problem(&self, point: &[f64]) -> Result<SdpProblem> {
        if self.is_projection() {
            return Err(Error::UnsupportedForm(
                "projection-form representation has no slice to freeze; decide membership by solving".into(),
            ));
        }
        if point.len() != self.primal_dim {
            return arg(format!("point has dimension {}, expected {}", point.len(), self.primal_dim));
        }
        let mut map: Vec<AffineScalar> = point.iter().map(|&v| AffineScalar::constant(v)).collect();
        map.extend((0..self.aux_dim).map(AffineScalar::var));
        Ok(SdpProblem {
            n_vars: self.aux_dim,
            objective: AffineScalar::default(),
            sense: Sense::Min,
            psd_blocks: self.psd_blocks.iter().map(|b| b.substitute(&map)).collect(),
            nonneg_scalars: self.nonneg_scalars.iter().map(|s| s.substitute(&map)).collect(),
            equalities: self.equalities.iter().map(|s| s.substitute(&map)).collect(),
        })
    }

    /// All constraints over all variables, with a zero objective.
    pub fn to_problem(&self) -> SdpProblem {
        SdpProblem {
            n_vars: self.n_vars(),
            objective: AffineScalar::default(),
            sense: Sense::Min,
            psd_blocks: self.psd_blocks.clone(),
            nonneg_scalars: self.nonneg_scalars.clone(),
            equalities: self.equalities.clone(),
        }
    }

    /// Largest constraint violation at a full variable assignment: negative
    /// block eigenvalues, negative scalars, equality residuals.
    pub fn max_violation(&self, vars: &[f64]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for b in &self.psd_blocks {
            let lmin = crate::symlin::eigvals_sym(&b.eval(vars))?.last().copied().unwrap_or(0.0);
            worst = worst.max(-lmin);
        }
        for s in &self.nonneg_scalars {
            worst = worst.max(-s.eval(vars));
        }
        for s in &self.equalities {
            worst = worst.max(s.eval(vars).abs());
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn halfspace(n: usize) -> SdpRepresentation {
        let mut r = SdpRepresentation::new(n);
        r.add_nonneg(AffineScalar::var(0));
        r
    }

    #[test]
    fn empty_representation() {
        let r = SdpRepresentation::new(3);
        assert_eq!(r.size(), 0);
        let p = r.freeze_membership_problem(&[-1.0, 5.0, 0.0]).unwrap();
        assert_eq!(p.n_vars, 0);
        assert!(p.psd_blocks.is_empty() && p.nonneg_scalars.is_empty());
        assert_eq!(SdpRepresentation::new(0).size(), 0);
    }

    #[test]
    fn embed_halfspace_through_sum() {
        let mut host = SdpRepresentation::new(2);
        host.embed(&halfspace(1), &[AffineScalar::from_terms(0.0, [(0, 1.0), (1, 1.0)])]).unwrap();
        assert_eq!(host.size(), 1);
        assert_eq!(host.nonneg_scalars()[0].terms, vec![(0, 1.0), (1, 1.0)]);
        assert!(host.embed(&halfspace(1), &[]).is_err());
    }

    #[test]
    fn embed_psd2_adds_two() {
        let mut psd = SdpRepresentation::new(3);
        psd.add_psd(&psd.interface_sym(2, 0));
        let mut host = halfspace(3);
        let before = host.size();
        let image: Vec<_> = (0..3).map(AffineScalar::var).collect();
        host.embed(&psd, &image).unwrap();
        assert_eq!(host.size(), before + psd.size());
        assert_eq!(host.size(), 3);
    }

    #[test]
    fn projection_embed_ties_outputs() {
        let mut ray = SdpRepresentation::new_projection(2);
        let t = ray.fresh_vec(1).remove(0);
        ray.add_nonneg(t.clone());
        ray.set_output(vec![t.clone(), t]).unwrap();
        let mut host = SdpRepresentation::new(2);
        host.embed(&ray, &host.interface()).unwrap();
        assert_eq!(host.aux_dim(), 1);
        assert_eq!(host.equalities().len(), 2);
        assert_eq!(host.max_violation(&[2.0, 2.0, 2.0]).unwrap(), 0.0);
        assert!(host.max_violation(&[2.0, 1.0, 2.0]).unwrap() > 0.5);
        assert!(matches!(ray.freeze_membership_problem(&[1.0, 1.0]), Err(Error::UnsupportedForm(_))));
    }

    #[test]
    fn freeze_substitutes_point() {
        let p = halfspace(1).freeze_membership_problem(&[-1.0]).unwrap();
        assert_eq!(p.nonneg_scalars[0].constant, -1.0);
        assert!(halfspace(1).freeze_membership_problem(&[1.0, 2.0]).is_err());
    }
}
