use super::{orthant_step, psd_step, OrthantStep, Pencil, PsdStep, Strategy};
use crate::error::{Error, Result};
use crate::lmi::{sum_exprs, AffineScalar, SdpRepresentation, SymExpr};
use crate::symlin::{complement_basis, svec_entry, svec_len};

/// `[[s I, u], [u^T, s]]`, PSD iff `‖u‖ <= s`.
pub(crate) fn arrow(u: &[AffineScalar], s: &AffineScalar) -> SymExpr {
    let d = u.len();
    SymExpr::from_fn(d + 1, |i, j| {
        if i == j {
            s.clone()
        } else if j == d {
            u[i].clone()
        } else {
            AffineScalar::default()
        }
    })
}

/// Packed-coordinate weights making the Euclidean norm equal the Frobenius
/// norm: 1 on the diagonal, `sqrt 2` off it.
pub fn svec_weights(n: usize) -> Vec<f64> {
    (0..svec_len(n)).map(|p| if svec_entry(n, p).0 == svec_entry(n, p).1 { 1.0 } else { std::f64::consts::SQRT_2 }).collect()
}

/// Slice-form `orthant(n,k)` over `x in R^n`.
pub fn build_orthant(n: usize, k: usize, strategy: Strategy) -> Result<SdpRepresentation> {
    let step = orthant_step(n, k, strategy)?;
    let mut rep = SdpRepresentation::new(n);
    let x = rep.interface();
    match step {
        OrthantStep::Free => {}
        OrthantStep::Scalars => x.into_iter().for_each(|xi| rep.add_nonneg(xi)),
        OrthantStep::Deriv => {
            let v = complement_basis(n)?;
            let image = SymExpr::diag(&x).congruence_t(v.matrix());
            let inner = build_psd_deriv(n - 1, k - 1, strategy)?;
            rep.embed(&inner, image.svec())?;
        }
        OrthantStep::Polar => {
            let v = complement_basis(n)?;
            let z = rep.fresh_sym(n - 1);
            rep.add_psd(&SymExpr::diag(&x).sub(&z.congruence(v.matrix())));
            let inner = build_psd_deriv(n - 1, k, strategy)?;
            rep.embed(&inner, z.svec())?;
        }
        OrthantStep::Soc => rep.add_psd(&arrow(&x, &sum_exprs(&x))),
    }
    Ok(rep)
}

/// Slice-form `psd(n,k)` over packed `X in S^n`.
pub fn build_psd_deriv(n: usize, k: usize, strategy: Strategy) -> Result<SdpRepresentation> {
    let step = psd_step(n, k, strategy)?;
    let mut rep = SdpRepresentation::new(svec_len(n));
    let x = rep.interface_sym(n, 0);
    match step {
        PsdStep::Free => {}
        PsdStep::Block => rep.add_psd(&x),
        PsdStep::Trace => rep.add_nonneg(x.trace()),
        PsdStep::Soc => soc_psd_into(&mut rep, &x),
        PsdStep::SchurHorn => {
            let z = rep.fresh_vec(n);
            rep.embed(&build_orthant(n, k, strategy)?, &z)?;
            let mut image = x.svec().to_vec();
            image.extend(z);
            rep.embed(&build_schur_horn(n)?, &image)?;
        }
    }
    Ok(rep)
}

fn soc_psd_into(rep: &mut SdpRepresentation, x: &SymExpr) {
    let w = svec_weights(x.dim());
    let u: Vec<AffineScalar> = x.svec().iter().zip(&w).map(|(e, wp)| e.scaled(*wp)).collect();
    rep.add_psd(&arrow(&u, &x.trace()));
}

/// `orthant(n,k)` through the second-order cone, `k in {n-2, n-3}`:
/// `(x, e_1(x)) ∈ Q` for `k = n-2`, and `diag(x) ⪰ V Z V^T` with
/// `(Z, tr Z) ∈ Q` for `k = n-3`.
pub fn build_soc_orthant(n: usize, k: usize) -> Result<SdpRepresentation> {
    if k + 2 == n {
        let mut rep = SdpRepresentation::new(n);
        let x = rep.interface();
        rep.add_psd(&arrow(&x, &sum_exprs(&x)));
        Ok(rep)
    } else if k + 3 == n {
        let mut rep = SdpRepresentation::new(n);
        let x = rep.interface();
        let v = complement_basis(n)?;
        let z = rep.fresh_sym(n - 1);
        rep.add_psd(&SymExpr::diag(&x).sub(&z.congruence(v.matrix())));
        soc_psd_into(&mut rep, &z);
        Ok(rep)
    } else {
        Err(Error::Strategy(format!("second-order form exists for k = n-2 or n-3, not orthant({n},{k})")))
    }
}

/// `psd(n, n-2)` as `(X, tr X) ∈ Q` with `X` measured in Frobenius norm.
pub fn build_soc_psd(n: usize) -> Result<SdpRepresentation> {
    if n < 2 {
        return Err(Error::Strategy("second-order form of psd(n, n-2) needs n >= 2".into()));
    }
    let mut rep = SdpRepresentation::new(svec_len(n));
    let x = rep.interface_sym(n, 0);
    soc_psd_into(&mut rep, &x);
    Ok(rep)
}

/// `SH_n` over the interface `(packed X, z)`.
pub fn build_schur_horn(n: usize) -> Result<SdpRepresentation> {
    if n == 0 {
        return Err(Error::Argument("Schur-Horn cone needs n >= 1".into()));
    }
    let nx = svec_len(n);
    let mut rep = SdpRepresentation::new(nx + n);
    let x = rep.interface_sym(n, 0);
    let z: Vec<AffineScalar> = (nx..nx + n).map(AffineScalar::var).collect();
    for i in 0..n - 1 {
        rep.add_nonneg(z[i].sub(&z[i + 1]));
    }
    rep.add_equality(x.trace().sub(&sum_exprs(&z)));
    rep.add_psd(&SymExpr::identity_times(n, &z[0]).sub(&x));
    for l in 2..n {
        let t = rep.fresh_vec(1).remove(0);
        let zl = rep.fresh_sym(n);
        rep.add_psd(&zl);
        rep.add_psd(&SymExpr::identity_times(n, &t).add(&zl).sub(&x));
        let budget = sum_exprs(&z[..l]).sub(&t.scaled(l as f64)).sub(&zl.trace());
        rep.add_nonneg(budget);
    }
    Ok(rep)
}

/// `{x : sum_i S A_i S x_i ∈ psd(m,k)}` with `S = A(e)^{-1/2}`.
pub fn build_spectrahedral_deriv(pencil: &Pencil, k: usize, strategy: Strategy) -> Result<SdpRepresentation> {
    let m = pencil.m();
    if k >= m {
        return Err(Error::Argument(format!("spectrahedral relaxation needs k <= m-1 = {}", m.saturating_sub(1))));
    }
    let normalized = pencil.normalized()?;
    let mut rep = SdpRepresentation::new(pencil.n());
    let image = SymExpr::from_fn(m, |i, j| {
        AffineScalar::from_terms(0.0, normalized.iter().enumerate().map(|(l, a)| (l, a.get(i, j))))
    });
    rep.embed(&build_psd_deriv(m, k, strategy)?, image.svec())?;
    Ok(rep)
}
