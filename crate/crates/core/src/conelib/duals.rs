//! Dual cones in projection form: each is the image of a lifted PSD set.
//!
//! ```text
//! orthant(n,k)*  derivative:  { diag(V Y V^T) : Y ∈ psd(n-1,k-1)* }
//! orthant(n,k)*  polar:       { diag(Y) : Y ⪰ 0, V^T Y V ∈ psd(n-1,k)* }
//! psd(n,k)*                   { W : (W, y) ∈ SH_n, y ∈ orthant(n,k)* }
//! ```
//!
//! Bases: `psd(n,0)* = S^n_+`, `psd(k+1,k)* = {tI : t >= 0}`, `orthant(n,0)*`
//! is the orthant and every cone with `k = n` has dual `{0}`.

use super::builders::{arrow, build_schur_horn, svec_weights};
use super::{orthant_step, psd_step, OrthantStep, Pencil, PsdStep, Strategy};
use crate::error::{Error, Result};
use crate::lmi::{AffineScalar, SdpRepresentation, SymExpr};
use crate::symlin::{complement_basis, svec_entry, svec_len};

pub fn build_orthant_dual(n: usize, k: usize, strategy: Strategy) -> Result<SdpRepresentation> {
    let step = orthant_step(n, k, strategy)?;
    let mut rep = SdpRepresentation::new_projection(n);
    let out = match step {
        OrthantStep::Free => vec![AffineScalar::default(); n],
        OrthantStep::Scalars => {
            let w = rep.fresh_vec(n);
            w.iter().for_each(|wi| rep.add_nonneg(wi.clone()));
            w
        }
        OrthantStep::Deriv => {
            let v = complement_basis(n)?;
            let y = rep.embed_output(&build_psd_deriv_dual(n - 1, k - 1, strategy)?);
            SymExpr::from_svec(n - 1, y).congruence(v.matrix()).diagonal()
        }
        OrthantStep::Polar => {
            let v = complement_basis(n)?;
            let y = rep.fresh_sym(n);
            rep.add_psd(&y);
            rep.embed(&build_psd_deriv_dual(n - 1, k, strategy)?, y.congruence_t(v.matrix()).svec())?;
            y.diagonal()
        }
        OrthantStep::Soc => {
            // {A^T (u, s) : ‖u‖ <= s} with A x = (x, 1^T x)
            let u = rep.fresh_vec(n);
            let s = rep.fresh_vec(1).remove(0);
            rep.add_psd(&arrow(&u, &s));
            u.iter().map(|ui| ui.add(&s)).collect()
        }
    };
    rep.set_output(out)?;
    Ok(rep)
}

pub fn build_psd_deriv_dual(n: usize, k: usize, strategy: Strategy) -> Result<SdpRepresentation> {
    let step = psd_step(n, k, strategy)?;
    let nx = svec_len(n);
    let mut rep = SdpRepresentation::new_projection(nx);
    let out = match step {
        PsdStep::Free => vec![AffineScalar::default(); nx],
        PsdStep::Block => {
            let w = rep.fresh_sym(n);
            rep.add_psd(&w);
            w.into_svec()
        }
        PsdStep::Trace => {
            let t = rep.fresh_vec(1).remove(0);
            rep.add_nonneg(t.clone());
            SymExpr::identity_times(n, &t).into_svec()
        }
        PsdStep::Soc => {
            // W = M + sI with ‖M‖_F <= s, M read from u through the sqrt 2 packing
            let u = rep.fresh_vec(nx);
            let s = rep.fresh_vec(1).remove(0);
            rep.add_psd(&arrow(&u, &s));
            let w = svec_weights(n);
            (0..nx)
                .map(|p| {
                    let (i, j) = svec_entry(n, p);
                    let m = u[p].scaled(1.0 / w[p]);
                    if i == j {
                        m.add(&s)
                    } else {
                        m
                    }
                })
                .collect()
        }
        PsdStep::SchurHorn => {
            let w = rep.fresh_sym(n);
            let y = rep.embed_output(&build_orthant_dual(n, k, strategy)?);
            let mut image = w.svec().to_vec();
            image.extend(y);
            rep.embed(&build_schur_horn(n)?, &image)?;
            w.into_svec()
        }
    };
    rep.set_output(out)?;
    Ok(rep)
}

/// `{(<S A_i S, Y>)_i : Y ∈ psd(m,k)*}`.
pub fn build_spectrahedral_dual(pencil: &Pencil, k: usize, strategy: Strategy) -> Result<SdpRepresentation> {
    let m = pencil.m();
    if k >= m {
        return Err(Error::Argument(format!("spectrahedral relaxation needs k <= m-1 = {}", m.saturating_sub(1))));
    }
    let normalized = pencil.normalized()?;
    let mut rep = SdpRepresentation::new_projection(pencil.n());
    let y = SymExpr::from_svec(m, rep.embed_output(&build_psd_deriv_dual(m, k, strategy)?));
    rep.set_output(normalized.iter().map(|a| y.inner_with(a)).collect())?;
    Ok(rep)
}
