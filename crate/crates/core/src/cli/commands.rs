use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::json;

use super::{
    parse_spec, parse_vector, BoundaryArgs, Command, Format, MemberArgs, RepresentArgs, SolveArgs, VerifyArgs,
    EXIT_FAILURE, EXIT_OK,
};
use crate::conelib::{size_of, size_report, ConeSpec, Strategy};
use crate::error::{Error, Result};
use crate::lmi::{json as lmi_json, sdpa};
use crate::oracle::{margin_for, Decision};
use crate::sampling::seeded;
use crate::sdpsolve::{
    cone_program, dual_membership, feasibility_margin_report, solve_file, Sense, SolveReport, SolverConfig, Status,
};
use crate::symlin::{svec_index, svec_len, ToleranceConfig};
use crate::verify::{run_all, run_suite, VerifyConfig};

pub(super) fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Represent(a) => represent(a, out),
        Command::Member(a) => member(a, out),
        Command::Solve(a) => solve(a, out),
        Command::Boundary(a) => boundary(a, out),
        Command::Verify(a) => verify(a, out),
    }
}

fn emit(out: &mut dyn Write, path: Option<&std::path::Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn strategy_totals(spec: &ConeSpec) -> BTreeMap<&'static str, Option<usize>> {
    Strategy::ALL.iter().map(|&s| (s.name(), size_of(&spec.clone().with_strategy(s)).ok())).collect()
}

fn represent(a: RepresentArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = parse_spec(&a.spec.spec, a.spec.strategy.as_deref())?;
    let rep = spec.build()?;
    let report = size_report(&spec)?;
    if report.total != rep.size() {
        return Err(Error::Numerical(format!("size table says {} but the built representation has {}", report.total, rep.size())));
    }
    let totals = strategy_totals(&spec);
    let mut text = report.to_string();
    text.push_str(&format!(
        "variables: {} interface + {} auxiliary, {} blocks, {} scalars, {} equalities\n",
        rep.primal_dim(),
        rep.aux_dim(),
        rep.psd_blocks().len(),
        rep.nonneg_scalars().len(),
        rep.equalities().len()
    ));
    text.push_str("total size by strategy:\n");
    for (name, t) in &totals {
        let shown = t.map(|v| v.to_string()).unwrap_or_else(|| "n/a".into());
        text.push_str(&format!("  {name:<6} {shown}\n"));
    }
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("representation.json"), lmi_json::to_json(&rep))?;
        std::fs::write(dir.join("representation.dat-s"), sdpa::to_sdpa(&rep.to_problem()))?;
        std::fs::write(dir.join("sizes.txt"), &text)?;
    }
    match a.format {
        Format::Json => {
            let v = json!({ "size_report": report, "totals": totals, "spec": serde_json::from_str::<serde_json::Value>(&spec.to_json())? });
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Format::Sdpa => write!(out, "{}", sdpa::to_sdpa(&rep.to_problem()))?,
        Format::Text | Format::Csv => write!(out, "{text}")?,
    }
    Ok(EXIT_OK)
}

/// Matrix cones accept packed coordinates or all `n^2` entries.
fn interface_point(spec: &ConeSpec, v: Vec<f64>) -> Result<Vec<f64>> {
    if let Some(n) = spec.matrix_dim() {
        if v.len() == n * n && n * n != svec_len(n) {
            let mut p = vec![0.0; svec_len(n)];
            for i in 0..n {
                for j in i..n {
                    if (v[i * n + j] - v[j * n + i]).abs() > 1e-12 * (1.0 + v[i * n + j].abs()) {
                        return Err(Error::Argument(format!("matrix is not symmetric at ({i},{j})")));
                    }
                    p[svec_index(n, i, j)] = v[i * n + j];
                }
            }
            return Ok(p);
        }
    }
    if v.len() != spec.interface_dim() {
        return Err(Error::Argument(format!("point has {} entries, {} expects {}", v.len(), spec.label(), spec.interface_dim())));
    }
    Ok(v)
}

/// Linear functional on the packed vector equal to `<C, X>` for full input.
fn interface_functional(spec: &ConeSpec, v: Vec<f64>) -> Result<Vec<f64>> {
    let full = spec.matrix_dim().is_some_and(|n| v.len() == n * n && n > 1);
    let mut c = interface_point(spec, v)?;
    if full {
        let n = spec.matrix_dim().expect("matrix cone");
        for i in 0..n {
            for j in i + 1..n {
                c[svec_index(n, i, j)] *= 2.0;
            }
        }
    }
    Ok(c)
}

#[derive(Serialize)]
struct MemberOutput {
    cone: String,
    strategy: &'static str,
    size: usize,
    oracle_margin: Option<f64>,
    oracle_binding: Option<usize>,
    oracle_decision: Option<Decision>,
    representation_margin: Option<f64>,
    representation_residual: Option<f64>,
    representation_member: bool,
    agreement: Option<bool>,
}

fn member(a: MemberArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = parse_spec(&a.spec.spec, a.spec.strategy.as_deref())?;
    let point = interface_point(&spec, parse_vector(&a.point)?)?;
    let mut tol = ToleranceConfig::default();
    if let Some(t) = a.tol {
        tol.boundary = t;
    }
    let cfg = SolverConfig::default();
    let rep = spec.build()?;
    let res = if spec.is_dual() {
        let d = dual_membership(&rep, &point, Some(&spec.interface_weights()), tol.dual_residual, &cfg)?;
        MemberOutput {
            cone: spec.label(),
            strategy: spec.strategy.name(),
            size: rep.size(),
            oracle_margin: None,
            oracle_binding: None,
            oracle_decision: None,
            representation_margin: None,
            representation_residual: Some(d.residual),
            representation_member: d.accepted,
            agreement: None,
        }
    } else {
        let v = margin_for(&spec, &point, &tol)?;
        let m = feasibility_margin_report(&rep.freeze_membership_problem(&point)?, &cfg)?.margin;
        let member = m >= -tol.margin;
        let agreement = match v.decision {
            Decision::Boundary => None,
            d => Some((d == Decision::In) == member),
        };
        MemberOutput {
            cone: spec.label(),
            strategy: spec.strategy.name(),
            size: rep.size(),
            oracle_margin: Some(v.margin),
            oracle_binding: v.binding_index,
            oracle_decision: Some(v.decision),
            representation_margin: Some(m),
            representation_residual: None,
            representation_member: member,
            agreement,
        }
    };
    if a.format == Format::Json {
        writeln!(out, "{}", serde_json::to_string_pretty(&res)?)?;
    } else {
        writeln!(out, "cone: {} [{}], representation size {}", res.cone, res.strategy, res.size)?;
        match (res.oracle_margin, res.oracle_decision) {
            (Some(m), Some(d)) => {
                let b = res.oracle_binding.map(|i| format!(" (binding coefficient {i})")).unwrap_or_default();
                writeln!(out, "oracle: margin {m:.6e}{b} -> {d:?}")?;
            }
            _ => writeln!(out, "oracle: none for dual cones")?,
        }
        if let Some(m) = res.representation_margin {
            writeln!(out, "representation: lifted margin {m:.6e} -> {}", if res.representation_member { "In" } else { "Out" })?;
        }
        if let Some(r) = res.representation_residual {
            writeln!(out, "representation: distance to image {r:.6e} -> {}", if res.representation_member { "In" } else { "Out" })?;
        }
        match res.agreement {
            Some(true) => writeln!(out, "agreement: yes")?,
            Some(false) => writeln!(out, "agreement: NO")?,
            None if res.oracle_decision.is_some() => writeln!(out, "agreement: not decided (point within the boundary band)")?,
            None => {}
        }
    }
    Ok(if res.agreement == Some(false) { EXIT_FAILURE } else { EXIT_OK })
}

fn parse_equality(spec: &ConeSpec, text: &str) -> Result<(Vec<f64>, f64)> {
    let (lhs, rhs) = text.split_once('=').ok_or_else(|| Error::Argument(format!("equality '{text}' needs the form a1,..,ad=b")))?;
    let b = rhs.trim().parse::<f64>().map_err(|_| Error::Argument(format!("'{rhs}' is not a number")))?;
    Ok((interface_functional(spec, parse_vector(lhs)?)?, b))
}

fn solve(a: SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let mut cfg = SolverConfig::default();
    if let Some(t) = a.tol {
        cfg.tol_residual = t;
        cfg.tol_gap = t;
    }
    let report: SolveReport = match (&a.sdpa, &a.spec) {
        (Some(path), _) => solve_file(path, &cfg)?,
        (None, Some(s)) => {
            let spec = parse_spec(s, a.strategy.as_deref())?;
            let c = match &a.objective {
                Some(o) => interface_functional(&spec, parse_vector(o)?)?,
                None => vec![0.0; spec.interface_dim()],
            };
            let eqs = a.equalities.iter().map(|e| parse_equality(&spec, e)).collect::<Result<Vec<_>>>()?;
            let rep = spec.build()?;
            let sense = if a.maximize { Sense::Max } else { Sense::Min };
            cone_program(&rep, &c, sense, &eqs, &cfg)?
        }
        (None, None) => return Err(Error::Argument("solve needs --spec or --sdpa".into())),
    };
    #[derive(Serialize)]
    struct SolveOutput<'a> {
        status: Status,
        unbounded: bool,
        report: &'a SolveReport,
    }
    let shown = SolveOutput { status: report.status, unbounded: report.status == Status::Unbounded, report: &report };
    let text = serde_json::to_string_pretty(&shown)? + "\n";
    emit(out, a.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct BoundaryRow {
    pub theta: f64,
    pub dir_x: f64,
    pub dir_y: f64,
    pub x: f64,
    pub y: f64,
    pub objective: f64,
    pub status: String,
}

/// Maximize `cos(theta) p_a + sin(theta) p_b` over the cone with the slice
/// coordinate fixed; `(a, b)` are the two remaining coordinates in order.
pub fn boundary_rows(spec: &ConeSpec, thetas: &[f64], slice_coord: usize, slice_value: f64) -> Result<Vec<BoundaryRow>> {
    if spec.interface_dim() != 3 || spec.matrix_dim().is_some() {
        return Err(Error::Argument(format!("boundary needs a cone in R^3, {} lives in R^{}", spec.label(), spec.interface_dim())));
    }
    if slice_coord > 2 {
        return Err(Error::Argument("slice coordinate must be 0, 1 or 2".into()));
    }
    let free: Vec<usize> = (0..3).filter(|&i| i != slice_coord).collect();
    let rep = spec.build()?;
    let cfg = SolverConfig::default();
    let mut fix = vec![0.0; 3];
    fix[slice_coord] = 1.0;
    let eqs = [(fix, slice_value)];
    let mut rows = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let (dy, dx) = theta.sin_cos();
        let mut c = vec![0.0; 3];
        c[free[0]] = dx;
        c[free[1]] = dy;
        let r = cone_program(&rep, &c, Sense::Max, &eqs, &cfg)?;
        let pt = rep.interface();
        let val = |i: usize| if r.status == Status::Optimal { pt[i].eval(&r.primal_point) } else { f64::NAN };
        rows.push(BoundaryRow {
            theta,
            dir_x: dx,
            dir_y: dy,
            x: val(free[0]),
            y: val(free[1]),
            objective: r.objective_value,
            status: format!("{:?}", r.status).to_lowercase(),
        });
    }
    Ok(rows)
}

fn boundary(a: BoundaryArgs, out: &mut dyn Write) -> Result<i32> {
    use rand::Rng;
    let spec = parse_spec(&a.spec.spec, a.spec.strategy.as_deref())?;
    let thetas: Vec<f64> = match a.seed {
        Some(seed) => {
            let mut rng = seeded(seed);
            let mut t: Vec<f64> = (0..a.count).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
            t.sort_by(f64::total_cmp);
            t
        }
        None => (0..a.count).map(|j| std::f64::consts::TAU * j as f64 / a.count as f64).collect(),
    };
    let rows = boundary_rows(&spec, &thetas, a.slice_coord.unwrap_or(2), a.slice_value)?;
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        _ => {
            let mut w = csv::Writer::from_writer(vec![]);
            for r in &rows {
                w.serialize(r).map_err(|e| Error::Numerical(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Numerical(e.to_string()))?).expect("csv is utf-8")
        }
    };
    emit(out, a.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = VerifyConfig { seed: a.seed, n_min: a.n_min, n_max: a.n_max, points: a.points };
    let results = if a.suite == "all" { run_all(&cfg)? } else { vec![run_suite(&a.suite, &cfg)?] };
    if a.format == Format::Json {
        writeln!(out, "{}", serde_json::to_string_pretty(&results)?)?;
    } else {
        writeln!(out, "seed {}, n in {}..={}, {} points per suite", cfg.seed, cfg.n_min, cfg.n_max, cfg.points)?;
        for r in &results {
            writeln!(out, "{r}")?;
        }
    }
    Ok(if results.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_FAILURE })
}
