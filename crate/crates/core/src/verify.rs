//! Randomized invariant suites behind `derivcone verify`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{
    check_main_identity_with, check_polar_identity_with, majorization_check, orthant_margin, psd_deriv_margin,
};
use crate::sampling::{gaussian_sym, random_orthogonal, seeded, uniform_vec};
use crate::symlin::{
    charpoly_coeffs, complement_basis, eigvals_sym, elem_sym_all, ComplementBasis, Matrix, SymMatrix, ToleranceConfig,
};

pub const SUITES: [&str; 7] = ["elem-sym", "main-id", "polar-id", "basis", "oracle", "majorization", "canary"];

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    /// Random points per suite.
    pub points: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 42, n_min: 2, n_max: 8, points: 500 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl std::fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:<13} cases {:>6}  failures {:>4}  worst {:.3e}  tol {:.0e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.failures,
            self.worst,
            self.tolerance
        )
    }
}

/// `e_0..e_k` with the sign of each update flipped: a deliberately broken
/// recurrence the identity suites must catch.
pub fn flipped_elem_sym(x: &[f64], k: usize) -> Vec<f64> {
    let mut c = vec![0.0; k + 1];
    c[0] = 1.0;
    for (i, &xi) in x.iter().enumerate() {
        for j in (1..=k.min(i + 1)).rev() {
            c[j] -= xi * c[j - 1];
        }
    }
    c
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    failures: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Tally { name, tolerance, cases: 0, failures: 0, worst: 0.0 }
    }

    fn record(&mut self, err: f64) {
        self.cases += 1;
        if !(err <= self.tolerance) {
            self.failures += 1;
        }
        if err.is_nan() || err > self.worst {
            self.worst = err;
        }
    }

    fn flag(&mut self, ok: bool) {
        self.record(if ok { 0.0 } else { f64::INFINITY });
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name.into(),
            cases: self.cases,
            failures: self.failures,
            worst: self.worst,
            tolerance: self.tolerance,
            passed: self.cases > 0 && self.failures == 0,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

/// A second complement basis by Gram-Schmidt on `e_i - e_{i+1}`.
pub fn gram_schmidt_basis(n: usize) -> Result<ComplementBasis> {
    let mut cols: Vec<Vec<f64>> = vec![];
    for i in 0..n - 1 {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v[i + 1] = -1.0;
        for c in &cols {
            let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(c).for_each(|(a, b)| *a -= d * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|a| a / norm).collect());
    }
    ComplementBasis::from_matrix(Matrix::from_fn(n, n - 1, |i, j| cols[j][i]), &ToleranceConfig::default())
}

fn det(m: &SymMatrix) -> Result<f64> {
    Ok(eigvals_sym(m)?.iter().product())
}

fn run_main_id<R: Rng>(cfg: &VerifyConfig, rng: &mut R, esym: fn(&[f64], usize) -> Vec<f64>, t: &mut Tally) -> Result<()> {
    for p in 0..cfg.points {
        let n = cfg.n_min.max(2) + p % (cfg.n_max.max(2) - cfg.n_min.max(2) + 1);
        let x = uniform_vec(n, -1.0, 1.0, rng);
        let s = rng.random_range(-1.0..1.0);
        t.record(check_main_identity_with(&x, s, esym)?);
    }
    Ok(())
}

fn run_polar_id<R: Rng>(cfg: &VerifyConfig, rng: &mut R, esym: fn(&[f64], usize) -> Vec<f64>, t: &mut Tally) -> Result<()> {
    for p in 0..cfg.points {
        let n = cfg.n_min.max(2) + p % (cfg.n_max.max(2) - cfg.n_min.max(2) + 1);
        let x = uniform_vec(n, -1.0, 1.0, rng);
        for k in 0..n {
            match check_polar_identity_with(&x, k, esym) {
                Ok(e) => t.record(e),
                Err(Error::SingularPivot { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<SuiteResult> {
    if cfg.n_min > cfg.n_max || cfg.n_max < 2 {
        return Err(Error::Argument(format!("bad n range {}..={}", cfg.n_min, cfg.n_max)));
    }
    let tol = ToleranceConfig::default();
    let mut rng = seeded(cfg.seed);
    let ns = || cfg.n_min.max(1)..=cfg.n_max;
    let result = match name {
        "elem-sym" => {
            let mut t = Tally::new("elem-sym", 1e-10);
            for p in 0..cfg.points.max(1) * 2 {
                let n = ns().nth(p % ns().count()).unwrap();
                let x = uniform_vec(n, -1.0, 1.0, &mut rng);
                let c = charpoly_coeffs(&SymMatrix::from_diag(&x))?;
                let e = elem_sym_all(&x, n);
                let scale = 1.0 + e.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let err = c.iter().zip(&e[1..]).map(|(a, b)| (a - b).abs() / scale).fold(0.0, f64::max);
                t.record(err);
                let mut y = x.clone();
                y.reverse();
                let perm = elem_sym_all(&y, n);
                t.flag(perm.iter().zip(&e).all(|(a, b)| rel(*a, *b) <= 1e-14));
            }
            t.finish()
        }
        "main-id" => {
            let mut t = Tally::new("main-id", 1e-8);
            run_main_id(cfg, &mut rng, elem_sym_all, &mut t)?;
            t.finish()
        }
        "polar-id" => {
            let mut t = Tally::new("polar-id", 1e-8);
            run_polar_id(cfg, &mut rng, elem_sym_all, &mut t)?;
            t.finish()
        }
        "basis" => {
            let mut t = Tally::new("basis", 1e-10);
            for n in ns().filter(|&n| n >= 2) {
                let v = complement_basis(n)?;
                let (a, b) = v.defect();
                t.flag(a.max(b) <= tol.orthonormality);
                t.flag(complement_basis(n)? == v);
                let w = gram_schmidt_basis(n)?;
                for _ in 0..cfg.points / 10 + 1 {
                    let x = uniform_vec(n, -1.0, 1.0, &mut rng);
                    t.record(rel(det(&v.compress_diag(&x))?, det(&w.compress_diag(&x))?));
                }
            }
            t.finish()
        }
        "oracle" => {
            let mut t = Tally::new("oracle", 1e-10);
            for p in 0..cfg.points {
                let n = ns().nth(p % ns().count()).unwrap();
                let x = uniform_vec(n, -1.0, 1.0, &mut rng);
                let q = random_orthogonal(n, &mut rng);
                let d = SymMatrix::from_diag(&x);
                let rotated = d.congruence(&q);
                for k in 0..=n {
                    let a = orthant_margin(&x, k, &tol)?;
                    let b = psd_deriv_margin(&d, k, &tol)?;
                    let c = psd_deriv_margin(&rotated, k, &tol)?;
                    if a.margin.is_finite() {
                        t.record(rel(a.margin, b.margin));
                        // rotation goes through an eigensolve of a full matrix
                        t.flag(rel(a.margin, c.margin) <= 1e-8);
                    } else {
                        t.flag(b.margin == f64::INFINITY && c.margin == f64::INFINITY);
                    }
                }
            }
            t.finish()
        }
        "majorization" => {
            let mut t = Tally::new("majorization", 0.0);
            for p in 0..cfg.points {
                let n = ns().nth(p % ns().count()).unwrap();
                let x = gaussian_sym(n, &mut rng);
                let lambda = eigvals_sym(&x)?;
                t.flag(majorization_check(&x, &lambda, &tol)?);
                let mut up = lambda.clone();
                up[0] += 0.5;
                if n > 1 {
                    t.flag(!majorization_check(&x, &up, &tol)?);
                }
            }
            t.finish()
        }
        "canary" => {
            // passes when the broken recurrence is detected
            let mut broken = Tally::new("canary", 1e-8);
            run_main_id(cfg, &mut rng, flipped_elem_sym, &mut broken)?;
            let detected = broken.failures > 0;
            let mut t = Tally::new("canary", 0.0);
            t.flag(detected);
            t.worst = broken.worst;
            t.finish()
        }
        other => return Err(Error::Argument(format!("unknown suite '{other}' (expected one of {})", SUITES.join(", ")))),
    };
    Ok(result)
}

pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<SuiteResult>> {
    SUITES.iter().map(|s| run_suite(s, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suites_pass() {
        let cfg = VerifyConfig { points: 100, ..Default::default() };
        for r in run_all(&cfg).unwrap() {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn canary_breaks_main_identity() {
        let cfg = VerifyConfig { points: 50, ..Default::default() };
        let mut t = Tally::new("x", 1e-8);
        run_main_id(&cfg, &mut seeded(1), flipped_elem_sym, &mut t).unwrap();
        assert!(t.failures > 0);
    }

    #[test]
    fn n_range_is_honored() {
        let cfg = VerifyConfig { n_min: 3, n_max: 3, points: 10, ..Default::default() };
        assert!(run_suite("main-id", &cfg).unwrap().passed);
        assert!(run_suite("main-id", &VerifyConfig { n_min: 5, n_max: 4, ..cfg }).is_err());
    }

    #[test]
    fn gram_schmidt_is_a_basis() {
        let v = gram_schmidt_basis(6).unwrap();
        assert!(v.defect().0 < 1e-12);
    }
}
