mod common;

use common::*;
use derivcone::conelib::three_ellipse;
use derivcone::oracle::*;
use derivcone::sampling::{gaussian_sym, random_orthogonal, seeded};
use derivcone::symlin::{eigvals_sym, SymMatrix, ToleranceConfig};
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

proptest! {
    #[test]
    fn orthant_margin_equals_diagonal_psd_margin(x in prop::collection::vec(-1.0f64..1.0, 1..=8), k in 0usize..8) {
        let k = k % (x.len() + 1);
        let a = orthant_margin(&x, k, &tol()).unwrap();
        let b = psd_deriv_margin(&SymMatrix::from_diag(&x), k, &tol()).unwrap();
        if a.margin.is_finite() {
            prop_assert!((a.margin - b.margin).abs() <= 1e-10 * (1.0 + a.margin.abs()));
        } else {
            prop_assert_eq!(b.margin, f64::INFINITY);
        }
        prop_assert_eq!(a.decision, b.decision);
    }

    #[test]
    fn orthant_margin_is_min_of_elementary_polynomials(x in prop::collection::vec(-2.0f64..2.0, 1..=8), k in 0usize..8) {
        let n = x.len();
        let k = k % (n + 1);
        let v = orthant_margin(&x, k, &tol()).unwrap();
        let expect = (1..=n - k).map(|j| esym_subsets(&x, j)).fold(f64::INFINITY, f64::min);
        if expect.is_finite() {
            prop_assert!((v.margin - expect).abs() <= 1e-10 * (1.0 + expect.abs()));
        }
        prop_assert_eq!(v.is_member(true), in_orthant_relaxation(&x, k) || v.decision == Decision::Boundary);
    }

    #[test]
    fn psd_margin_is_conjugation_invariant(seed in any::<u64>(), n in 1usize..7, k in 0usize..7) {
        let k = k % (n + 1);
        let mut rng = seeded(seed);
        let x = gaussian_sym(n, &mut rng);
        let q = random_orthogonal(n, &mut rng);
        let a = psd_deriv_margin(&x, k, &tol()).unwrap().margin;
        let b = psd_deriv_margin(&x.congruence(&q), k, &tol()).unwrap().margin;
        if a.is_finite() {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn spectrum_is_majorized_by_itself(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = seeded(seed);
        let x = gaussian_sym(n, &mut rng);
        let l = eigvals_sym(&x).unwrap();
        prop_assert!(majorization_check(&x, &l, &tol()).unwrap());
        let flat = vec![l.iter().sum::<f64>() / n as f64; n];
        if n > 1 && (l[0] - l[n - 1]).abs() > 1e-6 {
            // the uniform vector is majorized by the spectrum, not the other way round
            prop_assert!(!majorization_check(&x, &flat, &tol()).unwrap());
        }
    }
}

#[test]
fn nesting_of_relaxations() {
    let x = [1.0, 0.5, -0.2, -0.3];
    let members: Vec<bool> = (0..=4).map(|k| orthant_margin(&x, k, &tol()).unwrap().is_member(false)).collect();
    for w in members.windows(2) {
        assert!(!w[0] || w[1]);
    }
    assert!(!members[0] && members[4]);
}

#[test]
fn three_ellipse_points() {
    let p = three_ellipse();
    // (3,0) is a focus-sum point: 3 + 5 + 0 = 8
    let v = spectrahedral_margin(&p, 0, &[3.0, 0.0, 1.0], &tol()).unwrap();
    assert_eq!(v.decision, Decision::Boundary);
    assert!(det(&ellipse(3.0, 0.0, 1.0)).abs() <= 1e-9);
    // sum of distances 6 + sqrt 52 + 3 > 8
    let v = spectrahedral_margin(&p, 0, &[6.0, 0.0, 1.0], &tol()).unwrap();
    assert_eq!(v.decision, Decision::Out);
    assert!(det(&ellipse(6.0, 0.0, 1.0)) < 0.0 || eigs(&ellipse(6.0, 0.0, 1.0))[7] < 0.0);
    for k in 0..=8 {
        assert_eq!(spectrahedral_margin(&p, k, &[0.0, 0.0, 1.0], &tol()).unwrap().decision, Decision::In);
    }
    assert!(spectrahedral_margin(&p, 9, &[0.0, 0.0, 1.0], &tol()).is_err());
}

#[test]
fn pairing_minimum() {
    let d = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    let p = vec![vec![1.0, -0.5], vec![2.0, 2.0]];
    assert_eq!(dual_pairing_min(&d, &p, None).unwrap(), -0.5);
    assert_eq!(dual_pairing_min(&d, &p, Some(&[1.0, 2.0])).unwrap(), -2.0);
    assert!(dual_pairing_min(&[], &p, None).is_err());
}

#[test]
fn identities_on_fixed_points() {
    for n in 2..=8 {
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        assert!(check_main_identity(&x, 0.3).unwrap() <= 1e-10);
        for k in 0..n {
            assert!(check_polar_identity(&x, k).unwrap() <= 1e-9);
        }
        assert!(check_polar_identity(&x, n).is_err());
    }
}
