//! Browser bindings: boundary curves of the 3-ellipse relaxations, membership
//! verdicts, and size tables. Everything here runs the exact oracles; no SDP
//! is solved in the page.

use derivcone::conelib::{size_report, three_ellipse, ConeSpec, Strategy};
use derivcone::oracle::margin_for;
use derivcone::sampling::boundary_step;
use derivcone::symlin::{svec_len, SymMatrix, ToleranceConfig};
use wasm_bindgen::prelude::*;

fn js(e: derivcone::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn cone(kind: &str, n: usize, k: usize, strategy: Strategy) -> Result<ConeSpec, JsError> {
    let spec = match kind {
        "orthant" => ConeSpec::orthant(n, k, strategy),
        "psd" => ConeSpec::psd(n, k, strategy),
        other => return Err(JsError::new(&format!("unknown cone '{other}'"))),
    };
    spec.validate().map_err(js)?;
    Ok(spec)
}

/// Flat `[x0, y0, x1, y1, ..]` on the `z = 1` slice of the `k`-th relaxation,
/// one point per ray from the origin. Rays that stay inside give `NaN`.
#[wasm_bindgen]
pub fn ellipse_boundary(k: usize, count: usize) -> Result<Vec<f64>, JsError> {
    let spec = ConeSpec::spectrahedral(three_ellipse(), k, Strategy::Auto);
    spec.validate().map_err(js)?;
    let tol = ToleranceConfig::default();
    let mut out = Vec::with_capacity(2 * count);
    for j in 0..count {
        let th = std::f64::consts::TAU * j as f64 / count as f64;
        let dir = [th.cos(), th.sin(), 0.0];
        match boundary_step(&spec, &[0.0, 0.0, 1.0], &dir, 100.0, &tol).map_err(js)? {
            Some(t) => out.extend([t * dir[0], t * dir[1]]),
            None => out.extend([f64::NAN, f64::NAN]),
        }
    }
    Ok(out)
}

/// Oracle verdict as JSON. Matrices may be given packed (upper triangle by
/// rows) or as all `n^2` entries.
#[wasm_bindgen]
pub fn membership(kind: &str, n: usize, k: usize, point: &str) -> Result<String, JsError> {
    let spec = cone(kind, n, k, Strategy::Auto)?;
    let mut v = point
        .split([',', ' ', ';', '\n'])
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|_| JsError::new(&format!("'{s}' is not a number"))))
        .collect::<Result<Vec<f64>, JsError>>()?;
    if kind == "psd" && v.len() == n * n && n > 1 {
        let rows: Vec<Vec<f64>> = v.chunks(n).map(<[f64]>::to_vec).collect();
        v = SymMatrix::from_rows(&rows).map_err(js)?.to_svec();
    }
    let expected = if kind == "psd" { svec_len(n) } else { n };
    if v.len() != expected {
        return Err(JsError::new(&format!("expected {expected} numbers, got {}", v.len())));
    }
    let verdict = margin_for(&spec, &v, &ToleranceConfig::default()).map_err(js)?;
    serde_json::to_string(&verdict).map_err(|e| JsError::new(&e.to_string()))
}

/// Recursion trace with per-level sizes for every strategy that applies.
#[wasm_bindgen]
pub fn size_table(kind: &str, n: usize, k: usize) -> Result<String, JsError> {
    let mut text = String::new();
    for s in Strategy::ALL {
        match size_report(&cone(kind, n, k, s)?) {
            Ok(r) => text.push_str(&r.to_string()),
            Err(e) => text.push_str(&format!("[{}]: {e}\n", s.name())),
        }
        text.push('\n');
    }
    Ok(text)
}
