mod common;

use common::rng;
use helmscatter::formulations::{DensityPair, LinearMap};
use helmscatter::linalg::{c64, diag, identity, matvec, vec_norm};
use helmscatter::solver::{gmres, refine_eigenpair, spectrum};
use helmscatter::spectral::{make_basic, BasicKind};
use helmscatter::CMat;
use proptest::prelude::*;
use faer::linalg::solvers::Solve;
use rand::Rng;

fn random_pair(seed: u64, n: usize) -> DensityPair {
    let mut g = rng(seed);
    let v: Vec<c64> = (0..2 * n).map(|_| c64::new(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0))).collect();
    DensityPair::from_stacked(&v)
}

fn true_residual(a: &CMat, x: &DensityPair, b: &DensityPair) -> f64 {
    let ax = matvec(a, &x.stacked());
    let r: Vec<c64> = ax.iter().zip(b.stacked()).map(|(p, q)| q - p).collect();
    vec_norm(&r) / vec_norm(&b.stacked())
}

#[test]
fn identity_converges_in_one_step() {
    let b = random_pair(1, 10);
    let kr = gmres(&identity(20), &b, 1e-12, 20).unwrap();
    assert_eq!(kr.iterations, 1);
    assert!(kr.converged);
    assert!(true_residual(&identity(20), &kr.solution, &b) < 1e-14);
}

#[test]
fn two_distinct_eigenvalues_take_two_steps() {
    let d: Vec<c64> = (0..40).map(|i| if i % 3 == 0 { c64::new(2.0, 1.0) } else { c64::new(-0.5, 0.0) }).collect();
    let a = diag(&d);
    let b = random_pair(2, 20);
    let kr = gmres(&a, &b, 1e-10, 40).unwrap();
    assert!(kr.converged && kr.iterations <= 2, "{}", kr.iterations);
}

#[test]
fn stalls_are_reported_as_not_converged() {
    // cyclic shift: GMRES makes no progress until the last step
    let n = 16;
    let a = CMat::from_fn(2 * n, 2 * n, |i, j| if (j + 1) % (2 * n) == i { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) });
    let mut e = vec![c64::new(0.0, 0.0); 2 * n];
    e[0] = c64::new(1.0, 0.0);
    let kr = gmres(&a, &DensityPair::from_stacked(&e), 1e-8, 10).unwrap();
    assert!(!kr.converged);
    assert_eq!(kr.iterations, 10);
    assert!(kr.history.iter().all(|&h| (h - 1.0).abs() < 1e-12));
    assert!(gmres(&a, &DensityPair::from_stacked(&e), 1e-8, 2 * n + 1).is_err());
}

#[test]
fn spectrum_of_a_multiplier_is_its_symbol() {
    let len = 32;
    let m = make_basic(BasicKind::Lambda).to_matrix(len);
    let ev = spectrum(&m).unwrap().eigenvalues;
    let mut want: Vec<f64> = (0..len as i64).map(|k| {
        let n = if k < 16 { k } else { k - 32 };
        if n == 0 { 1.0 } else { 1.0 / (n.abs() as f64) }
    }).collect();
    want.sort_by(f64::total_cmp);
    for (got, w) in ev.iter().zip(&want) {
        assert!((got.re - w).abs() < 1e-12 && got.im.abs() < 1e-12, "{got} vs {w}");
    }
}

#[test]
fn inverse_iteration_refines_eigenvalues() {
    let d: Vec<c64> = (1..=12).map(|i| c64::new(i as f64, 0.3 * i as f64)).collect();
    let mut g = rng(5);
    let q = CMat::from_fn(12, 12, |_, _| c64::new(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)));
    let qi = q.partial_piv_lu().solve(&identity(12));
    let a = &(&q * &diag(&d)) * &qi;
    let (lam, res) = refine_eigenpair(&a, c64::new(7.01, 2.09), 8).unwrap();
    assert!((lam - d[6]).norm() < 1e-9, "{lam}");
    assert!(res < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gmres_history_is_monotone_and_honest(seed in 0u64..10_000, shift in 2.0f64..6.0) {
        let n = 12;
        let mut g = rng(seed);
        let a = CMat::from_fn(2 * n, 2 * n, |i, j| {
            let z = c64::new(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)) / (2.0 * n as f64).sqrt();
            if i == j { z + shift } else { z }
        });
        prop_assert_eq!(LinearMap::dim(&a), 2 * n);
        let b = random_pair(seed + 1, n);
        let kr = gmres(&a, &b, 1e-10, 2 * n).unwrap();
        prop_assert!(kr.history.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(kr.converged);
        prop_assert!(true_residual(&a, &kr.solution, &b) <= 1e-9);
    }
}
