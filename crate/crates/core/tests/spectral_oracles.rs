mod common;

use common::{diff_max, rng};
use helmscatter::linalg::{c64, identity, matvec};
use helmscatter::spectral::*;
use proptest::prelude::*;
use rand::Rng;

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * std::f64::consts::PI * j as f64 / n as f64).collect()
}

#[test]
fn derivative_of_trig_polynomial() {
    let s = grid(64);
    let f: Vec<c64> = s.iter().map(|t| c64::new((3.0 * t).sin() + 0.5 * (7.0 * t).cos(), 0.0)).collect();
    let want: Vec<c64> = s.iter().map(|t| c64::new(3.0 * (3.0 * t).cos() - 3.5 * (7.0 * t).sin(), 0.0)).collect();
    let d = make_basic(BasicKind::D(1)).apply_slice(&f);
    assert!(diff_max(&d, &want) < 1e-12);
    let dm = matvec(&differentiation_matrix(64), &f);
    assert!(diff_max(&dm, &want) < 1e-12);
    // H cos(ms) = −sin(ms)
    let h = make_basic(BasicKind::H).apply_slice(&s.iter().map(|t| c64::new((4.0 * t).cos(), 0.0)).collect::<Vec<_>>());
    let hw: Vec<c64> = s.iter().map(|t| c64::new(-(4.0 * t).sin(), 0.0)).collect();
    assert!(diff_max(&h, &hw) < 1e-13);
}

#[test]
fn differentiation_matrix_is_the_d1_multiplier() {
    for n in [16, 30, 64] {
        let a = differentiation_matrix(n);
        let b = make_basic(BasicKind::D(1)).to_matrix(n);
        assert!(helmscatter::linalg::max_abs(&(&a - &b)) < 1e-12, "N={n}");
    }
}

#[test]
fn nilpotent_block_squares_to_zero_off_the_mean() {
    let h0 = nilpotent_h0();
    for n in [-9i64, -1, 1, 4, 100] {
        let sq = mat2_mul(&h0.symbol(n), &h0.symbol(n));
        assert!(sq.iter().flatten().all(|v| v.norm() < 1e-15), "n={n}");
    }
}

#[test]
fn power_law_slopes_are_recovered() {
    let x: Vec<f64> = (8..=64).map(|n| n as f64).collect();
    let y: Vec<f64> = x.iter().map(|n| 3.0 * n.powf(-2.5)).collect();
    assert!((fit_loglog_slope(&x, &y) + 2.5).abs() < 1e-12);
    let len = 256;
    let lam = make_basic(BasicKind::Lambda);
    let model = lam.to_matrix(len);
    let op = &model + &lam.then(&lam).then(&lam).to_matrix(len);
    let slope = multiplier_residual_order(&op, &model, 8, 64).unwrap();
    assert!((slope + 3.0).abs() < 1e-10, "{slope}");
    assert!(multiplier_residual_order(&op, &model, 8, 80).is_err());
}

#[test]
fn band_norm_ignores_the_nyquist_mode() {
    let len = 32;
    assert!((band_norm2(&identity(len), 8).unwrap() - 1.0).abs() < 1e-13);
    let nyq = GridFunction::mode(16, len).values;
    let p = helmscatter::CMat::from_fn(len, len, |i, j| nyq[i] * nyq[j].conj() / len as f64);
    assert!(band_norm2(&p, 8).unwrap() < 1e-13);
    assert!(helmscatter::linalg::norm2(&p) > 0.99);
}

proptest! {
    #[test]
    fn hd_is_h_then_d(r in -4i32..5, n in -200i64..200) {
        let hd = make_basic(BasicKind::HD(r)).symbol(n);
        let composed = make_basic(BasicKind::H).then(&make_basic(BasicKind::D(r))).symbol(n);
        let other = make_basic(BasicKind::D(r)).then(&make_basic(BasicKind::H)).symbol(n);
        let tol = 1e-12 * hd.norm().max(1.0);
        prop_assert!((hd - composed).norm() <= tol);
        prop_assert!((hd - other).norm() <= tol);
    }

    #[test]
    fn fft_application_matches_dense_matrix(half in 4usize..40, seed in 0u64..1000, r in -3i32..3) {
        let len = 2 * half;
        let mut g = rng(seed);
        let x: Vec<c64> = (0..len).map(|_| c64::new(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0))).collect();
        let m = make_basic(BasicKind::HD(r));
        let a = m.apply_slice(&x);
        let b = matvec(&m.to_matrix(len), &x);
        prop_assert!(diff_max(&a, &b) < 1e-10 * (half as f64).powi(r.max(0)));
        prop_assert!(diff_max(&GridFunction::from_coefficients(&GridFunction::new(x.clone()).coefficients()).values, &x) < 1e-13);
    }

    #[test]
    fn matrix_multiplier_modes(half in 4usize..24, n in -3i64..4) {
        let len = 2 * half;
        let h0 = nilpotent_h0();
        let m = h0.to_matrix(len);
        let got = mode_action(&m, n);
        let want = h0.grid_symbol(((n + len as i64) % len as i64) as usize, len);
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((got[i][j] - want[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn two_by_two_eigenvalues(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0, d in -5.0f64..5.0) {
        let m = [[c64::new(a, 0.0), c64::new(b, 1.0)], [c64::new(c, 0.0), c64::new(d, -0.5)]];
        let [l1, l2] = mat2_eigenvalues(&m);
        prop_assert!((l1 + l2 - (m[0][0] + m[1][1])).norm() < 1e-10);
        prop_assert!((l1 * l2 - mat2_det(&m)).norm() < 1e-9);
    }
}
