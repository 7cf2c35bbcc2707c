use serde::{Deserialize, Serialize};

use super::builders::svec_weights;
use super::{
    build_orthant, build_orthant_dual, build_psd_deriv, build_psd_deriv_dual, build_spectrahedral_deriv,
    build_spectrahedral_dual, Pencil, Strategy,
};
use crate::error::{Error, Result};
use crate::lmi::SdpRepresentation;
use crate::symlin::{svec_entry, svec_len};

#[derive(Debug, Clone, PartialEq)]
pub enum ConeKind {
    Orthant { n: usize, k: usize },
    PsdDeriv { n: usize, k: usize },
    Spectrahedral { pencil: Pencil, k: usize },
    Dual(Box<ConeSpec>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    pub kind: ConeKind,
    pub strategy: Strategy,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Wire {
    Orthant {
        n: usize,
        k: usize,
        #[serde(default)]
        strategy: Strategy,
    },
    #[serde(alias = "psd_deriv")]
    Psd {
        n: usize,
        k: usize,
        #[serde(default)]
        strategy: Strategy,
    },
    Spectrahedral {
        m: usize,
        #[serde(rename = "A")]
        a: Vec<Vec<(usize, usize, f64)>>,
        e: Vec<f64>,
        k: usize,
        #[serde(default)]
        strategy: Strategy,
    },
    Dual {
        inner: Box<Wire>,
    },
}

impl ConeSpec {
    pub fn orthant(n: usize, k: usize, strategy: Strategy) -> Self {
        ConeSpec { kind: ConeKind::Orthant { n, k }, strategy }
    }

    pub fn psd(n: usize, k: usize, strategy: Strategy) -> Self {
        ConeSpec { kind: ConeKind::PsdDeriv { n, k }, strategy }
    }

    pub fn spectrahedral(pencil: Pencil, k: usize, strategy: Strategy) -> Self {
        ConeSpec { kind: ConeKind::Spectrahedral { pencil, k }, strategy }
    }

    pub fn dual(inner: ConeSpec) -> Self {
        let strategy = inner.strategy;
        ConeSpec { kind: ConeKind::Dual(Box::new(inner)), strategy }
    }

    pub fn with_strategy(self, strategy: Strategy) -> Self {
        let kind = match self.kind {
            ConeKind::Dual(inner) => ConeKind::Dual(Box::new(inner.with_strategy(strategy))),
            other => other,
        };
        ConeSpec { kind, strategy }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            ConeKind::Orthant { n, k } | ConeKind::PsdDeriv { n, k } if k > n => {
                Err(Error::Argument(format!("k = {k} exceeds n = {n}")))
            }
            ConeKind::Orthant { n: 0, .. } | ConeKind::PsdDeriv { n: 0, .. } => Err(Error::Argument("n must be positive".into())),
            ConeKind::Spectrahedral { pencil, k } if *k >= pencil.m() => {
                Err(Error::Argument(format!("k = {k} must be below the pencil size {}", pencil.m())))
            }
            ConeKind::Dual(inner) => inner.validate(),
            _ => Ok(()),
        }
    }

    pub fn is_dual(&self) -> bool {
        matches!(self.kind, ConeKind::Dual(_))
    }

    /// The cone this spec is the dual of, or itself.
    pub fn primal(&self) -> &ConeSpec {
        match &self.kind {
            ConeKind::Dual(inner) => inner.primal(),
            _ => self,
        }
    }

    /// Dimension of the interface vector.
    pub fn interface_dim(&self) -> usize {
        match &self.kind {
            ConeKind::Orthant { n, .. } => *n,
            ConeKind::PsdDeriv { n, .. } => svec_len(*n),
            ConeKind::Spectrahedral { pencil, .. } => pencil.n(),
            ConeKind::Dual(inner) => inner.interface_dim(),
        }
    }

    /// Side length when the interface is a packed symmetric matrix.
    pub fn matrix_dim(&self) -> Option<usize> {
        match &self.kind {
            ConeKind::PsdDeriv { n, .. } => Some(*n),
            ConeKind::Dual(inner) => inner.matrix_dim(),
            _ => None,
        }
    }

    /// Per-coordinate weights under which the Euclidean norm of the packed
    /// interface is the natural one (Frobenius for matrices).
    pub fn interface_weights(&self) -> Vec<f64> {
        match self.matrix_dim() {
            Some(n) => svec_weights(n),
            None => vec![1.0; self.interface_dim()],
        }
    }

    /// Hyperbolicity direction of the primal cone (all-ones, identity or `e`),
    /// packed. It lies in the interior of the primal, so `<dir, w> = 1` cuts a
    /// compact slice of the dual.
    pub fn direction(&self) -> Vec<f64> {
        match &self.kind {
            ConeKind::Orthant { n, .. } => vec![1.0; *n],
            ConeKind::PsdDeriv { n, .. } => {
                (0..svec_len(*n)).map(|p| if svec_entry(*n, p).0 == svec_entry(*n, p).1 { 1.0 } else { 0.0 }).collect()
            }
            ConeKind::Spectrahedral { pencil, .. } => pencil.e().to_vec(),
            ConeKind::Dual(inner) => inner.direction(),
        }
    }

    /// Linear functional `<dir, .>` in packed coordinates; off-diagonal entries
    /// count twice.
    pub fn pairing(&self, a: &[f64], b: &[f64]) -> f64 {
        let w = self.interface_weights();
        a.iter().zip(b).zip(&w).map(|((x, y), wi)| x * y * wi * wi).sum()
    }

    pub fn build(&self) -> Result<SdpRepresentation> {
        self.validate()?;
        let s = self.strategy;
        match &self.kind {
            ConeKind::Orthant { n, k } => build_orthant(*n, *k, s),
            ConeKind::PsdDeriv { n, k } => build_psd_deriv(*n, *k, s),
            ConeKind::Spectrahedral { pencil, k } => build_spectrahedral_deriv(pencil, *k, s),
            ConeKind::Dual(inner) => match &inner.kind {
                ConeKind::Orthant { n, k } => build_orthant_dual(*n, *k, inner.strategy),
                ConeKind::PsdDeriv { n, k } => build_psd_deriv_dual(*n, *k, inner.strategy),
                ConeKind::Spectrahedral { pencil, k } => build_spectrahedral_dual(pencil, *k, inner.strategy),
                // closed convex cones are their own biduals
                ConeKind::Dual(x) => x.build(),
            },
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            ConeKind::Orthant { n, k } => format!("orthant({n},{k})"),
            ConeKind::PsdDeriv { n, k } => format!("psd({n},{k})"),
            ConeKind::Spectrahedral { pencil, k } => format!("spectrahedral(m={},n={},k={k})", pencil.m(), pencil.n()),
            ConeKind::Dual(inner) => format!("dual {}", inner.label()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let w: Wire = serde_json::from_str(text)?;
        let spec = Self::from_wire(w)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_wire()).expect("plain data")
    }

    fn from_wire(w: Wire) -> Result<Self> {
        Ok(match w {
            Wire::Orthant { n, k, strategy } => ConeSpec::orthant(n, k, strategy),
            Wire::Psd { n, k, strategy } => ConeSpec::psd(n, k, strategy),
            Wire::Spectrahedral { m, a, e, k, strategy } => {
                ConeSpec::spectrahedral(Pencil::from_triplets(m, &a, e)?, k, strategy)
            }
            Wire::Dual { inner } => ConeSpec::dual(Self::from_wire(*inner)?),
        })
    }

    fn to_wire(&self) -> Wire {
        let strategy = self.strategy;
        match &self.kind {
            ConeKind::Orthant { n, k } => Wire::Orthant { n: *n, k: *k, strategy },
            ConeKind::PsdDeriv { n, k } => Wire::Psd { n: *n, k: *k, strategy },
            ConeKind::Spectrahedral { pencil, k } => {
                Wire::Spectrahedral { m: pencil.m(), a: pencil.to_triplets(), e: pencil.e().to_vec(), k: *k, strategy }
            }
            ConeKind::Dual(inner) => Wire::Dual { inner: Box::new(inner.to_wire()) },
        }
    }
}
