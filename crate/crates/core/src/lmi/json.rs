//! JSON form of a representation.
//!
//! ```text
//! { "primal_dim": 3, "aux_dim": 0,
//!   "blocks": [ { "dim": 2, "const": [[0,0,1.0]], "coeffs": [ {"var": 0, "entries": [[0,1,1.0]]} ] } ],
//!   "equalities": [ { "const": 0.0, "terms": [[0, 1.0], [2, -1.0]] } ],
//!   "output_map": null }
//! ```
//!
//! Triplets are 0-based upper-triangle `[i, j, v]`. Scalar constraints are
//! written as blocks of dimension 1 and read back as scalars.

use serde::{Deserialize, Serialize};

use super::{AffineMatrixMap, AffineScalar, SdpRepresentation, SparseSym};
use crate::error::Result;

#[derive(Serialize, Deserialize)]
struct Wire {
    primal_dim: usize,
    aux_dim: usize,
    blocks: Vec<WireBlock>,
    equalities: Vec<WireScalar>,
    output_map: Option<WireOutput>,
}

#[derive(Serialize, Deserialize)]
struct WireBlock {
    dim: usize,
    #[serde(rename = "const")]
    constant: Vec<(usize, usize, f64)>,
    coeffs: Vec<WireCoeff>,
}

#[derive(Serialize, Deserialize)]
struct WireCoeff {
    var: usize,
    entries: Vec<(usize, usize, f64)>,
}

#[derive(Serialize, Deserialize)]
struct WireScalar {
    #[serde(rename = "const")]
    constant: f64,
    terms: Vec<(usize, f64)>,
}

#[derive(Serialize, Deserialize)]
struct WireOutput {
    dim: usize,
    rows: Vec<WireScalar>,
}

fn scalar_out(s: &AffineScalar) -> WireScalar {
    WireScalar { constant: s.constant, terms: s.terms.clone() }
}

fn scalar_in(w: WireScalar) -> AffineScalar {
    AffineScalar::from_terms(w.constant, w.terms)
}

pub fn to_json(rep: &SdpRepresentation) -> String {
    let mut blocks: Vec<WireBlock> = rep
        .psd_blocks()
        .iter()
        .map(|b| WireBlock {
            dim: b.dim,
            constant: b.constant.entries.clone(),
            coeffs: b.coeffs.iter().map(|(v, m)| WireCoeff { var: *v, entries: m.entries.clone() }).collect(),
        })
        .collect();
    blocks.extend(rep.nonneg_scalars().iter().map(|s| WireBlock {
        dim: 1,
        constant: if s.constant != 0.0 { vec![(0, 0, s.constant)] } else { vec![] },
        coeffs: s.terms.iter().map(|&(v, c)| WireCoeff { var: v, entries: vec![(0, 0, c)] }).collect(),
    }));
    let wire = Wire {
        primal_dim: rep.primal_dim(),
        aux_dim: rep.aux_dim(),
        blocks,
        equalities: rep.equalities().iter().map(scalar_out).collect(),
        output_map: rep
            .output_map()
            .map(|o| WireOutput { dim: o.len(), rows: o.iter().map(scalar_out).collect() }),
    };
    serde_json::to_string_pretty(&wire).expect("representation serializes")
}

pub fn from_json(text: &str) -> Result<SdpRepresentation> {
    let wire: Wire = serde_json::from_str(text)?;
    let mut psd = vec![];
    let mut scalars = vec![];
    for b in wire.blocks {
        if b.dim == 1 {
            let c = b.constant.iter().map(|e| e.2).sum();
            let terms = b.coeffs.iter().flat_map(|c| c.entries.iter().map(move |e| (c.var, e.2)));
            scalars.push(AffineScalar::from_terms(c, terms));
        } else {
            psd.push(AffineMatrixMap {
                dim: b.dim,
                constant: SparseSym::new(b.dim, b.constant),
                coeffs: b.coeffs.into_iter().map(|c| (c.var, SparseSym::new(b.dim, c.entries))).collect(),
            });
        }
    }
    let output = match wire.output_map {
        Some(o) => {
            if o.dim != o.rows.len() {
                return crate::error::arg("output_map dim does not match its rows");
            }
            Some(o.rows.into_iter().map(scalar_in).collect())
        }
        None => None,
    };
    SdpRepresentation::from_parts(
        wire.primal_dim,
        wire.aux_dim,
        psd,
        scalars,
        wire.equalities.into_iter().map(scalar_in).collect(),
        output,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmi::SymExpr;

    #[test]
    fn roundtrip_with_scalars_and_output() {
        let mut r = SdpRepresentation::new_projection(2);
        let y = r.fresh_sym(2);
        r.add_psd(&y);
        r.add_nonneg(y.trace());
        r.add_equality(y.get(0, 1).sub(&AffineScalar::constant(0.25)));
        r.set_output(y.diagonal()).unwrap();
        r.add_psd(&SymExpr::identity_times(1, &AffineScalar::var(3)));
        let back = from_json(&to_json(&r)).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn empty_roundtrip() {
        let r = SdpRepresentation::new(0);
        assert_eq!(from_json(&to_json(&r)).unwrap(), r);
    }

    #[test]
    fn rejects_out_of_range_variable() {
        let text = r#"{"primal_dim":1,"aux_dim":0,"blocks":[{"dim":1,"const":[],"coeffs":[{"var":4,"entries":[[0,0,1.0]]}]}],"equalities":[],"output_map":null}"#;
        assert!(from_json(text).is_err());
    }
}
