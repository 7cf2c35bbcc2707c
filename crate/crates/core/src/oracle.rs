//! Representation-free ground truth: membership margins read directly off the
//! coefficient inequalities, and the identities behind the constructions as
//! executable checks. Nothing here calls the solver.

use serde::Serialize;

use crate::conelib::{ConeKind, ConeSpec, Pencil};
use crate::error::{Error, Result};
use crate::symlin::{
    charpoly_coeffs, complement_basis, eigvals_sym, elem_sym_all, schur_complement, svec_dim, SymMatrix,
    ToleranceConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Decision {
    In,
    Out,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembershipVerdict {
    /// `min_{1 <= i <= n-k}` of the coefficient family; `+inf` when empty.
    pub margin: f64,
    /// The `i` attaining the minimum.
    pub binding_index: Option<usize>,
    pub decision: Decision,
}

impl MembershipVerdict {
    fn from_coeffs(coeffs: &[f64], count: usize, tol: f64) -> Self {
        let mut margin = f64::INFINITY;
        let mut binding_index = None;
        for (i, &c) in coeffs.iter().take(count).enumerate() {
            if c < margin {
                margin = c;
                binding_index = Some(i + 1);
            }
        }
        let decision = if margin.abs() <= tol {
            Decision::Boundary
        } else if margin > 0.0 {
            Decision::In
        } else {
            Decision::Out
        };
        MembershipVerdict { margin, binding_index, decision }
    }

    pub fn is_member(&self, include_boundary: bool) -> bool {
        match self.decision {
            Decision::In => true,
            Decision::Boundary => include_boundary,
            Decision::Out => false,
        }
    }
}

/// Verdict for `x ∈ orthant(n,k)`: `e_1(x), .., e_{n-k}(x) >= 0`.
pub fn orthant_margin(x: &[f64], k: usize, tol: &ToleranceConfig) -> Result<MembershipVerdict> {
    let n = x.len();
    if k > n {
        return Err(Error::Argument(format!("k = {k} exceeds n = {n}")));
    }
    let e = elem_sym_all(x, n - k);
    Ok(MembershipVerdict::from_coeffs(&e[1..], n - k, tol.boundary))
}

/// Verdict for `X ∈ psd(n,k)`: `E_1(X), .., E_{n-k}(X) >= 0`.
pub fn psd_deriv_margin(x: &SymMatrix, k: usize, tol: &ToleranceConfig) -> Result<MembershipVerdict> {
    let n = x.dim();
    if k > n {
        return Err(Error::Argument(format!("k = {k} exceeds n = {n}")));
    }
    let e = charpoly_coeffs(x)?;
    Ok(MembershipVerdict::from_coeffs(&e, n - k, tol.boundary))
}

/// Verdict for `x` in the `k`-th relaxation of the spectrahedral cone of
/// `pencil`, through `sum_i S A_i S x_i ∈ psd(m,k)`, `S = A(e)^{-1/2}`.
pub fn spectrahedral_margin(pencil: &Pencil, k: usize, x: &[f64], tol: &ToleranceConfig) -> Result<MembershipVerdict> {
    if x.len() != pencil.n() {
        return Err(Error::Argument(format!("point has {} entries, pencil has {} matrices", x.len(), pencil.n())));
    }
    let a = pencil.normalized()?;
    let mut image = SymMatrix::zeros(pencil.m());
    for (ai, &xi) in a.iter().zip(x) {
        image = image.add(&ai.scaled(xi));
    }
    psd_deriv_margin(&image, k, tol)
}

/// Oracle verdict for a point of a primal cone given by `spec`.
pub fn margin_for(spec: &ConeSpec, point: &[f64], tol: &ToleranceConfig) -> Result<MembershipVerdict> {
    if point.len() != spec.interface_dim() {
        return Err(Error::Argument(format!("point has {} entries, expected {}", point.len(), spec.interface_dim())));
    }
    match &spec.kind {
        ConeKind::Orthant { k, .. } => orthant_margin(point, *k, tol),
        ConeKind::PsdDeriv { n, k } => {
            debug_assert_eq!(svec_dim(point.len()), Some(*n));
            psd_deriv_margin(&SymMatrix::from_svec(*n, point), *k, tol)
        }
        ConeKind::Spectrahedral { pencil, k } => spectrahedral_margin(pencil, *k, point, tol),
        ConeKind::Dual(_) => Err(Error::UnsupportedForm("dual cones have no coefficient description".into())),
    }
}

fn det_sym(x: &SymMatrix) -> Result<f64> {
    Ok(eigvals_sym(x)?.iter().product())
}

/// `|e_{n-1}(x + t1) - n det(V^T diag(x) V + tI)| / (1 + |e_{n-1}(x + t1)|)`.
pub fn check_main_identity(x: &[f64], t: f64) -> Result<f64> {
    check_main_identity_with(x, t, elem_sym_all)
}

/// As [`check_main_identity`] with a caller-supplied `e_0..e_k` routine.
pub fn check_main_identity_with(x: &[f64], t: f64, esym: fn(&[f64], usize) -> Vec<f64>) -> Result<f64> {
    let n = x.len();
    let v = complement_basis(n)?;
    let shifted: Vec<f64> = x.iter().map(|xi| xi + t).collect();
    let lhs = esym(&shifted, n - 1)[n - 1];
    let m = v.compress_diag(x).add(&SymMatrix::identity(n - 1).scaled(t));
    let rhs = n as f64 * det_sym(&m)?;
    Ok((lhs - rhs).abs() / (1.0 + lhs.abs()))
}

/// Relative gap in `e_1(x) E_{n-1-k}(M/M_22) = (n-k) e_{n-k}(x)` with
/// `M = Q^T diag(x) Q`.
pub fn check_polar_identity(x: &[f64], k: usize) -> Result<f64> {
    check_polar_identity_with(x, k, elem_sym_all)
}

pub fn check_polar_identity_with(x: &[f64], k: usize, esym: fn(&[f64], usize) -> Vec<f64>) -> Result<f64> {
    let n = x.len();
    if k + 1 > n {
        return Err(Error::Argument(format!("polar identity needs k <= n-1, got k = {k}, n = {n}")));
    }
    let q = complement_basis(n)?.q();
    let m = SymMatrix::from_diag(x).congruence_t(&q);
    let sc = schur_complement(&m, &ToleranceConfig::default())?;
    let e = esym(x, n);
    let lambda = eigvals_sym(&sc)?;
    let lhs = e[1] * esym(&lambda, n - 1 - k)[n - 1 - k];
    let rhs = (n - k) as f64 * e[n - k];
    Ok((lhs - rhs).abs() / (1.0 + lhs.abs().max(rhs.abs())))
}

/// Whether `z` is weakly decreasing and majorizes the spectrum of `X`.
pub fn majorization_check(x: &SymMatrix, z: &[f64], tol: &ToleranceConfig) -> Result<bool> {
    if z.len() != x.dim() {
        return Err(Error::Argument("z must have one entry per eigenvalue".into()));
    }
    if z.windows(2).any(|w| w[0] < w[1]) {
        return Ok(false);
    }
    let lambda = eigvals_sym(x)?;
    let (mut sl, mut sz) = (0.0, 0.0);
    for (l, zi) in lambda.iter().zip(z) {
        sl += l;
        sz += zi;
        if sl > sz + tol.majorization {
            return Ok(false);
        }
    }
    Ok((sl - sz).abs() <= tol.majorization)
}

/// `min <w, x>` over all pairs. `weights` are the per-coordinate factors of
/// the interface geometry (`sqrt 2` on packed off-diagonals), entering squared.
pub fn dual_pairing_min(dual: &[Vec<f64>], primal: &[Vec<f64>], weights: Option<&[f64]>) -> Result<f64> {
    if dual.is_empty() || primal.is_empty() {
        return Err(Error::Argument("pairing needs at least one sample on each side".into()));
    }
    let mut best = f64::INFINITY;
    for w in dual {
        for x in primal {
            if w.len() != x.len() {
                return Err(Error::Argument("dual and primal samples differ in dimension".into()));
            }
            let p: f64 = match weights {
                Some(c) => w.iter().zip(x).zip(c).map(|((a, b), ci)| a * b * ci * ci).sum(),
                None => w.iter().zip(x).map(|(a, b)| a * b).sum(),
            };
            best = best.min(p);
        }
    }
    Ok(best)
}
