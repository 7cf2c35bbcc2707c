//! SDPA sparse (`.dat-s`) text.
//!
//! Problems are written in SDPA's primal form: minimize `c^T y` subject to
//! `sum_i F_i y_i - F_0 ⪰ 0`, so each block's constant is negated into `F_0`.
//! Scalar constraints and equalities share one trailing diagonal block (negative
//! size); an equality `g = 0` is written as the adjacent pair `g >= 0, -g >= 0`
//! and the reader folds such exact pairs back into equalities. Objective
//! constants and a maximization sense survive only as `*` comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lmi::{AffineMatrixMap, AffineScalar, SparseSym};
use crate::sdpsolve::{Sense, SdpProblem};

fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".into()
    } else if (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn to_sdpa(p: &SdpProblem) -> String {
    let mut diag: Vec<AffineScalar> = p.nonneg_scalars.clone();
    for e in &p.equalities {
        diag.push(e.clone());
        diag.push(e.scaled(-1.0));
    }
    let sign = if p.sense == Sense::Max { -1.0 } else { 1.0 };

    let mut out = String::from("* derivcone SDPA export\n");
    if p.sense == Sense::Max {
        out.push_str("* maximize\n");
    }
    if p.objective.constant != 0.0 {
        let _ = writeln!(out, "* objective constant {}", num(p.objective.constant));
    }
    let nblocks = p.psd_blocks.len() + usize::from(!diag.is_empty());
    let _ = writeln!(out, "{}", p.n_vars);
    let _ = writeln!(out, "{nblocks}");
    let mut dims: Vec<String> = p.psd_blocks.iter().map(|b| b.dim.to_string()).collect();
    if !diag.is_empty() {
        dims.push(format!("-{}", diag.len()));
    }
    let _ = writeln!(out, "{}", dims.join(" "));
    let mut c = vec![0.0; p.n_vars];
    for &(i, v) in &p.objective.terms {
        c[i] = sign * v;
    }
    let _ = writeln!(out, "{}", c.iter().map(|&v| num(v)).collect::<Vec<_>>().join(" "));

    for (b, block) in p.psd_blocks.iter().enumerate() {
        for &(i, j, v) in &block.constant.entries {
            let _ = writeln!(out, "0 {} {} {} {}", b + 1, i + 1, j + 1, num(-v));
        }
        for (var, m) in &block.coeffs {
            for &(i, j, v) in &m.entries {
                let _ = writeln!(out, "{} {} {} {} {}", var + 1, b + 1, i + 1, j + 1, num(v));
            }
        }
    }
    let db = p.psd_blocks.len() + 1;
    for (k, s) in diag.iter().enumerate() {
        if s.constant != 0.0 {
            let _ = writeln!(out, "0 {db} {} {} {}", k + 1, k + 1, num(-s.constant));
        }
    }
    // matno-major order keeps the output deterministic and grouped
    let mut by_var: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
    for (k, s) in diag.iter().enumerate() {
        for &(var, v) in &s.terms {
            by_var.entry(var).or_default().push((k, v));
        }
    }
    for (var, ents) in by_var {
        for (k, v) in ents {
            let _ = writeln!(out, "{} {db} {} {} {}", var + 1, k + 1, k + 1, num(v));
        }
    }
    out
}

struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let last_line = self.items.last().map_or(1, |t| t.0);
        let t = self.items.get(self.pos).copied().ok_or_else(|| Error::Parse {
            line: last_line,
            msg: format!("unexpected end of input, expected {what}"),
        })?;
        self.pos += 1;
        Ok(t)
    }

    fn int(&mut self, what: &str) -> Result<(usize, i64)> {
        let (line, s) = self.next(what)?;
        let v = s.parse::<f64>().ok().filter(|v| v.fract() == 0.0 && v.is_finite());
        v.map(|v| (line, v as i64))
            .ok_or_else(|| Error::Parse { line, msg: format!("expected integer {what}, found '{s}'") })
    }

    fn real(&mut self, what: &str) -> Result<(usize, f64)> {
        let (line, s) = self.next(what)?;
        s.parse::<f64>()
            .map(|v| (line, v))
            .map_err(|_| Error::Parse { line, msg: format!("expected number for {what}, found '{s}'") })
    }

    fn done(&self) -> bool {
        self.pos >= self.items.len()
    }
}

pub fn from_sdpa(text: &str) -> Result<SdpProblem> {
    let mut sense = Sense::Min;
    let mut offset = 0.0;
    let mut items = vec![];
    let mut in_header = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if in_header && (trimmed.starts_with('*') || trimmed.starts_with('"')) {
            let body = trimmed.trim_start_matches(['*', '"']).trim();
            if body == "maximize" {
                sense = Sense::Max;
            } else if let Some(v) = body.strip_prefix("objective constant ") {
                offset = v.trim().parse().map_err(|_| Error::Parse { line, msg: "bad objective constant".into() })?;
            }
            continue;
        }
        in_header = false;
        // "=mDIM"-style annotations are common in hand-written files
        for tok in raw.split(|c: char| c.is_whitespace() || ",{}()".contains(c)).filter(|s| !s.is_empty()) {
            if tok.starts_with('=') {
                continue;
            }
            items.push((line, tok));
        }
    }
    let mut t = Tokens { items, pos: 0 };

    let (line, m) = t.int("constraint count")?;
    if m < 0 {
        return Err(Error::Parse { line, msg: "negative constraint count".into() });
    }
    let m = m as usize;
    let (line, nb) = t.int("block count")?;
    if nb < 0 {
        return Err(Error::Parse { line, msg: "negative block count".into() });
    }
    let mut dims = vec![];
    for _ in 0..nb {
        let (line, d) = t.int("block size")?;
        if d == 0 {
            return Err(Error::Parse { line, msg: "block size 0".into() });
        }
        dims.push(d);
    }
    let mut c = vec![0.0; m];
    for ci in c.iter_mut() {
        *ci = t.real("objective coefficient")?.1;
    }

    // per block: constant entries and per-variable entries
    let mut ents: Vec<Vec<Vec<(usize, usize, f64)>>> = dims.iter().map(|_| vec![vec![]; m + 1]).collect();
    while !t.done() {
        let (line, matno) = t.int("matrix number")?;
        let (_, blk) = t.int("block number")?;
        let (_, i) = t.int("row index")?;
        let (_, j) = t.int("column index")?;
        let (_, v) = t.real("entry value")?;
        if matno < 0 || matno as usize > m {
            return Err(Error::Parse { line, msg: format!("matrix number {matno} out of range 0..={m}") });
        }
        if blk < 1 || blk as usize > dims.len() {
            return Err(Error::Parse { line, msg: format!("block number {blk} out of range") });
        }
        let d = dims[blk as usize - 1];
        let size = d.unsigned_abs() as i64;
        if i < 1 || j < 1 || i > size || j > size {
            return Err(Error::Parse { line, msg: format!("index ({i},{j}) outside block of size {size}") });
        }
        if d < 0 && i != j {
            return Err(Error::Parse { line, msg: "off-diagonal entry in a diagonal block".into() });
        }
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        ents[blk as usize - 1][matno as usize].push((i as usize - 1, j as usize - 1, v));
    }

    let mut psd_blocks = vec![];
    let mut scalars = vec![];
    let mut equalities = vec![];
    for (b, &d) in dims.iter().enumerate() {
        let size = d.unsigned_abs() as usize;
        if d > 1 {
            let constant = SparseSym::new(size, ents[b][0].iter().map(|&(i, j, v)| (i, j, -v)));
            let coeffs = (1..=m)
                .map(|k| (k - 1, SparseSym::new(size, ents[b][k].iter().copied())))
                .filter(|(_, s)| !s.is_zero())
                .collect();
            psd_blocks.push(AffineMatrixMap { dim: size, constant, coeffs });
        } else {
            let mut diag = vec![AffineScalar::default(); size];
            for &(i, _, v) in &ents[b][0] {
                diag[i].constant -= v;
            }
            for (k, list) in ents[b].iter().enumerate().skip(1) {
                for &(i, _, v) in list {
                    diag[i].terms.push((k - 1, v));
                }
            }
            let diag: Vec<AffineScalar> =
                diag.into_iter().map(|s| AffineScalar::from_terms(s.constant, s.terms)).collect();
            let mut p = 0;
            while p < diag.len() {
                if p + 1 < diag.len() && diag[p + 1] == diag[p].scaled(-1.0) && diag[p] != AffineScalar::default() {
                    equalities.push(diag[p].clone());
                    p += 2;
                } else {
                    scalars.push(diag[p].clone());
                    p += 1;
                }
            }
        }
    }
    let sign = if sense == Sense::Max { -1.0 } else { 1.0 };
    let objective = AffineScalar::from_terms(offset, c.iter().enumerate().map(|(i, &v)| (i, sign * v)));
    Ok(SdpProblem { n_vars: m, objective, sense, psd_blocks, nonneg_scalars: scalars, equalities })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> SdpProblem {
        SdpProblem {
            n_vars: 2,
            objective: AffineScalar::from_terms(0.5, [(0, 1.0), (1, -2.0)]),
            sense: Sense::Max,
            psd_blocks: vec![AffineMatrixMap {
                dim: 2,
                constant: SparseSym::new(2, [(0, 0, 1.0), (1, 1, 1.0)]),
                coeffs: vec![(1, SparseSym::new(2, [(0, 1, 0.1)]))],
            }],
            nonneg_scalars: vec![AffineScalar::from_terms(3.0, [(0, -1.0)])],
            equalities: vec![AffineScalar::from_terms(-1.0, [(0, 1.0), (1, 1.0)])],
        }
    }

    #[test]
    fn roundtrip_is_exact() {
        let p = toy();
        let text = to_sdpa(&p);
        assert_eq!(from_sdpa(&text).unwrap(), p);
    }

    #[test]
    fn empty_problem_has_zero_blocks() {
        let p = SdpProblem::default();
        let text = to_sdpa(&p);
        assert!(text.lines().any(|l| l == "0"));
        assert_eq!(from_sdpa(&text).unwrap(), p);
    }

    #[test]
    fn single_block_header() {
        let p = SdpProblem {
            n_vars: 1,
            psd_blocks: vec![AffineMatrixMap {
                dim: 2,
                constant: SparseSym::new(2, std::iter::empty()),
                coeffs: vec![(0, SparseSym::new(2, [(0, 0, 1.0), (1, 1, 1.0)]))],
            }],
            ..SdpProblem::default()
        };
        let text = to_sdpa(&p);
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('*')).collect();
        assert_eq!(&body[..3], &["1", "1", "2"]);
    }

    #[test]
    fn malformed_block_line_reports_line() {
        let text = "* c\n1\n1\n2x\n1\n1 1 1 1 1\n";
        match from_sdpa(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn accepts_punctuated_header() {
        let text = "\"comment\n1 =mDIM\n2 =nBLOCK\n{2, -1}\n{1.0}\n1 1 1 1 1\n1 2 1 1 1\n";
        let p = from_sdpa(text).unwrap();
        assert_eq!(p.psd_blocks.len(), 1);
        assert_eq!(p.nonneg_scalars.len(), 1);
    }
}
