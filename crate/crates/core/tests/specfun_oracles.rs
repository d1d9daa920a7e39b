use helmscatter::linalg::c64;
use helmscatter::specfun::*;
use proptest::prelude::*;
use std::f64::consts::PI;

#[test]
fn tabulated_values() {
    // Abramowitz & Stegun, table 9.1
    let cases = [
        (BesselKind::J0, 1.0, 0.765_197_686_557_966_6),
        (BesselKind::J1, 1.0, 0.440_050_585_744_933_5),
        (BesselKind::Y0, 1.0, 0.088_256_964_215_676_96),
        (BesselKind::Y1, 1.0, -0.781_212_821_300_288_7),
        (BesselKind::J0, 10.0, -0.245_935_764_451_348_3),
        (BesselKind::Y0, 10.0, 0.055_671_167_283_599_39),
    ];
    for (kind, x, want) in cases {
        let got = bessel(kind, x).unwrap();
        assert!((got - want).abs() < 1e-14, "{kind:?}({x}) = {got}, want {want}");
    }
}

#[test]
fn branches_agree_in_overlap_annulus() {
    for i in 0..=40 {
        let r = 11.0 + 2.0 * i as f64 / 40.0;
        for arg in [0.0, 0.3, 0.8, 1.5] {
            let z = c64::from_polar(r, arg);
            for order in 0..2 {
                let a = hankel1_series(order, z).unwrap();
                let b = hankel1_asymptotic(order, z).unwrap();
                assert!((a - b).norm() <= 1e-9 * b.norm().max(1.0), "order {order} z {z}: {a} vs {b}");
                let c = hankel1(order, z).unwrap();
                assert!((hankel1_reference(order, z).unwrap() - c).norm() <= 1e-9 * c.norm().max(1.0));
            }
        }
    }
    let below = hankel1_reference(0, c64::new(SERIES_CROSSOVER_RADIUS - 1e-9, 0.0)).unwrap();
    let above = hankel1_reference(0, c64::new(SERIES_CROSSOVER_RADIUS + 1e-9, 0.0)).unwrap();
    assert!((below - above).norm() < 1e-9);
}

#[test]
fn derivative_of_h0_is_minus_h1() {
    let h = 1e-3;
    for z in [c64::new(0.7, 0.0), c64::new(3.0, 0.4), c64::new(15.0, 0.1)] {
        let f = |dz: f64| hankel1(0, z + dz).unwrap();
        let fd = (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
        let h1 = hankel1(1, z).unwrap();
        assert!((fd + h1).norm() < 1e-9 * h1.norm(), "{z}: {fd} vs {}", -h1);
    }
}

#[test]
fn integer_orders_satisfy_recurrence() {
    for x in [0.5, 4.0, 30.0] {
        for n in 1..40 {
            let lhs = hankel1_n(n - 1, x).unwrap() + hankel1_n(n + 1, x).unwrap();
            let rhs = hankel1_n(n, x).unwrap() * (2.0 * n as f64 / x);
            assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm(), "x={x} n={n}");
        }
        assert!((hankel1_n(-3, x).unwrap() + hankel1_n(3, x).unwrap()).norm() < 1e-14 * hankel1_n(3, x).unwrap().norm());
    }
}

proptest! {
    #[test]
    fn wronskian(x in 0.05f64..60.0) {
        let j0 = bessel(BesselKind::J0, x).unwrap();
        let j1 = bessel(BesselKind::J1, x).unwrap();
        let y0 = bessel(BesselKind::Y0, x).unwrap();
        let y1 = bessel(BesselKind::Y1, x).unwrap();
        let w = j1 * y0 - j0 * y1;
        prop_assert!((w - 2.0 / (PI * x)).abs() < 1e-12 * (2.0 / (PI * x)).max(1.0));
    }

    #[test]
    fn integer_orders_match_backend(n in 0usize..30, x in 0.1f64..50.0) {
        let (j, y, _, _) = bessel_jy_deriv(n, x).unwrap();
        let h = hankel1_n(n as i32, x).unwrap();
        prop_assert!((h.re - j).abs() < 1e-12 * h.norm().max(1.0));
        prop_assert!((h.im - y).abs() < 1e-12 * h.norm().max(1.0));
        if n <= 1 {
            let b = hankel1(n as u32, c64::new(x, 0.0)).unwrap();
            prop_assert!((b - h).norm() < 1e-11 * b.norm());
        }
    }
}
