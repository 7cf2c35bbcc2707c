//! Semidefinite representations of derivative relaxations.
//!
//! Notation: `orthant(n,k)` is `{x in R^n : e_1(x), .., e_{n-k}(x) >= 0}` and
//! `psd(n,k)` is `{X in S^n : E_1(X), .., E_{n-k}(X) >= 0}`. Two recursions
//! connect them:
//!
//! ```text
//! derivative:  psd(n,k) <- orthant(n,k) <- psd(n-1,k-1) <- .. <- psd(n-k,0)
//! polar:       psd(n,k) <- orthant(n,k) <- psd(n-1,k)   <- .. <- psd(k+1,k)
//! ```
//!
//! `psd <- orthant` goes through the Schur-Horn cone, `orthant <- psd` either
//! through `V^T diag(x) V` (derivative) or `diag(x) ⪰ V Z V^T` (polar), where
//! `V` is an orthonormal basis of the complement of the all-ones vector.
//! Primal cones are built in slice form, duals in projection form.

mod builders;
mod duals;
mod pencil;
mod size;
mod spec;

pub use builders::{build_orthant, build_psd_deriv, build_schur_horn, build_soc_orthant, build_soc_psd, build_spectrahedral_deriv};
pub use duals::{build_orthant_dual, build_psd_deriv_dual, build_spectrahedral_dual};
pub use pencil::{three_ellipse, Pencil};
pub use size::{size_of, size_report, SizeReport, SizeRow};
pub use spec::{ConeKind, ConeSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "deriv")]
    DerivativeBased,
    #[serde(rename = "polar")]
    PolarBased,
    #[default]
    #[serde(rename = "auto")]
    Auto,
    #[serde(rename = "soc")]
    SocSimplified,
}

impl Strategy {
    pub const ALL: [Strategy; 4] =
        [Strategy::DerivativeBased, Strategy::PolarBased, Strategy::Auto, Strategy::SocSimplified];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::DerivativeBased => "deriv",
            Strategy::PolarBased => "polar",
            Strategy::Auto => "auto",
            Strategy::SocSimplified => "soc",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "deriv" | "derivative" => Ok(Strategy::DerivativeBased),
            "polar" => Ok(Strategy::PolarBased),
            "auto" => Ok(Strategy::Auto),
            "soc" => Ok(Strategy::SocSimplified),
            _ => Err(Error::Argument(format!("unknown strategy '{s}' (expected deriv, polar, auto or soc)"))),
        }
    }
}

/// How `orthant(n,k)` is obtained from the next level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum OrthantStep {
    Free,
    Scalars,
    Deriv,
    Polar,
    Soc,
}

/// How `psd(n,k)` is obtained from the next level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PsdStep {
    Free,
    Block,
    Trace,
    Soc,
    SchurHorn,
}

pub(crate) fn orthant_step(n: usize, k: usize, s: Strategy) -> Result<OrthantStep> {
    if k > n {
        return Err(Error::Argument(format!("orthant({n},{k}) needs k <= n")));
    }
    if k == n {
        return Ok(OrthantStep::Free);
    }
    if k == 0 {
        return Ok(OrthantStep::Scalars);
    }
    let polar_invalid = || Error::Strategy(format!("the polar step needs 1 <= k <= n-2; orthant({n},{k}) has k = n-1"));
    match s {
        Strategy::DerivativeBased => Ok(OrthantStep::Deriv),
        Strategy::PolarBased if k == n - 1 => Err(polar_invalid()),
        Strategy::PolarBased => Ok(OrthantStep::Polar),
        Strategy::Auto if 2 * k <= n || k == n - 1 => Ok(OrthantStep::Deriv),
        Strategy::Auto => Ok(OrthantStep::Polar),
        Strategy::SocSimplified if k == n - 1 => Err(polar_invalid()),
        Strategy::SocSimplified if k == n - 2 => Ok(OrthantStep::Soc),
        Strategy::SocSimplified => Ok(OrthantStep::Polar),
    }
}

pub(crate) fn psd_step(n: usize, k: usize, s: Strategy) -> Result<PsdStep> {
    if k > n {
        return Err(Error::Argument(format!("psd({n},{k}) needs k <= n")));
    }
    if k == n {
        return Ok(PsdStep::Free);
    }
    if k == 0 {
        return Ok(PsdStep::Block);
    }
    match s {
        // the pure derivative chain only bottoms out at psd(n-k, 0)
        Strategy::DerivativeBased => Ok(PsdStep::SchurHorn),
        _ if k == n - 1 => Ok(PsdStep::Trace),
        Strategy::SocSimplified if k == n - 2 => Ok(PsdStep::Soc),
        _ => Ok(PsdStep::SchurHorn),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_threshold() {
        assert_eq!(orthant_step(4, 2, Strategy::Auto).unwrap(), OrthantStep::Deriv);
        assert_eq!(orthant_step(5, 3, Strategy::Auto).unwrap(), OrthantStep::Polar);
        assert_eq!(orthant_step(5, 4, Strategy::Auto).unwrap(), OrthantStep::Deriv);
        assert!(matches!(orthant_step(5, 4, Strategy::PolarBased), Err(Error::Strategy(_))));
        assert_eq!(psd_step(6, 5, Strategy::Auto).unwrap(), PsdStep::Trace);
        assert_eq!(psd_step(6, 5, Strategy::DerivativeBased).unwrap(), PsdStep::SchurHorn);
    }

    #[test]
    fn strategy_names_roundtrip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("fast".parse::<Strategy>().is_err());
    }
}
