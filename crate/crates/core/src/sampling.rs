//! Seeded random data: orthogonal matrices, points near a cone's boundary and
//! primal cone members located by bisection against the oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::conelib::ConeSpec;
use crate::error::{Error, Result};
use crate::oracle::margin_for;
use crate::symlin::{Matrix, SymMatrix, ToleranceConfig};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn uniform_vec<R: Rng>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Symmetric matrix with independent standard normal entries on and above
/// the diagonal.
pub fn gaussian_sym<R: Rng>(n: usize, rng: &mut R) -> SymMatrix {
    let mut s = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            s.set(i, j, rng.sample(StandardNormal));
        }
    }
    s
}

/// Haar-distributed orthogonal matrix: Gram-Schmidt on a Gaussian matrix.
pub fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    loop {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut ok = true;
        for _ in 0..n {
            let mut v = gaussian_vec(n, rng);
            for _ in 0..2 {
                for c in &cols {
                    let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(c).for_each(|(a, b)| *a -= d * b);
                }
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            cols.push(v.into_iter().map(|a| a / norm).collect());
        }
        if ok {
            return Matrix::from_fn(n, n, |i, j| cols[j][i]);
        }
    }
}

/// Random direction in the interface space of `spec`, isotropic in the
/// cone's natural geometry (Frobenius for matrices).
pub fn random_direction<R: Rng>(spec: &ConeSpec, rng: &mut R) -> Vec<f64> {
    match spec.matrix_dim() {
        Some(n) => {
            let mut s = gaussian_sym(n, rng);
            for i in 0..n {
                for j in i + 1..n {
                    s.set(i, j, s.get(i, j) / std::f64::consts::SQRT_2);
                }
            }
            s.to_svec()
        }
        None => gaussian_vec(spec.interface_dim(), rng),
    }
}

pub fn natural_norm(spec: &ConeSpec, v: &[f64]) -> f64 {
    spec.pairing(v, v).sqrt()
}

/// Largest `t` in `[0, t_max]` with `center + t dir` accepted by the oracle,
/// by bisection; `None` when the whole segment is accepted.
pub fn boundary_step(
    spec: &ConeSpec,
    center: &[f64],
    dir: &[f64],
    t_max: f64,
    tol: &ToleranceConfig,
) -> Result<Option<f64>> {
    let inside = |t: f64| -> Result<bool> {
        let p: Vec<f64> = center.iter().zip(dir).map(|(c, d)| c + t * d).collect();
        Ok(margin_for(spec, &p, tol)?.margin >= 0.0)
    };
    if inside(t_max)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, t_max);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if inside(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(Some(lo))
}

/// Points of a primal cone on (or just inside) its boundary, normalized to
/// unit length. Each comes from bisecting a random ray out of the cone's
/// interior direction; rays that never leave the cone contribute their
/// direction, which then lies in the cone.
pub fn primal_boundary_samples<R: Rng>(
    spec: &ConeSpec,
    count: usize,
    rng: &mut R,
    tol: &ToleranceConfig,
) -> Result<Vec<Vec<f64>>> {
    if spec.is_dual() {
        return Err(Error::UnsupportedForm("bisection needs a primal cone with an oracle".into()));
    }
    let center = spec.direction();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = random_direction(spec, rng);
        let p: Vec<f64> = match boundary_step(spec, &center, &d, 1e6, tol)? {
            Some(t) => center.iter().zip(&d).map(|(c, di)| c + t * di).collect(),
            None => d,
        };
        let norm = natural_norm(spec, &p);
        if norm > 0.0 {
            out.push(p.iter().map(|v| v / norm).collect());
        }
    }
    Ok(out)
}

/// Test points whose oracle margin is at least `min_margin` in absolute
/// value, mixing scaled boundary points on both sides with unstructured
/// Gaussian points. Returns `(point, member)` pairs.
pub fn classified_points<R: Rng>(
    spec: &ConeSpec,
    count: usize,
    min_margin: f64,
    rng: &mut R,
    tol: &ToleranceConfig,
) -> Result<Vec<(Vec<f64>, bool)>> {
    let center = spec.direction();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * count.max(1) {
            return Err(Error::Numerical("could not draw points away from the boundary".into()));
        }
        let d = random_direction(spec, rng);
        let p: Vec<f64> = match out.len() % 3 {
            0 => d,
            _ => match boundary_step(spec, &center, &d, 1e3, tol)? {
                Some(t) => {
                    let s = if out.len() % 3 == 1 { rng.random_range(0.2..0.95) } else { rng.random_range(1.05..3.0) };
                    center.iter().zip(&d).map(|(c, di)| c + s * t * di).collect()
                }
                None => d,
            },
        };
        let norm = natural_norm(spec, &p);
        if norm == 0.0 {
            continue;
        }
        let p: Vec<f64> = p.iter().map(|v| v / norm).collect();
        let m = margin_for(spec, &p, tol)?.margin;
        if m.abs() >= min_margin {
            out.push((p, m > 0.0));
        }
    }
    Ok(out)
}
