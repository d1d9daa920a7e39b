use helmscatter::fields::*;
use helmscatter::geometry::{discretize, rotate_q, ShapeKind};
use helmscatter::linalg::c64;
use helmscatter::ElasticMedium;
use proptest::prelude::*;

fn medium(omega: f64) -> ElasticMedium {
    ElasticMedium::with_curvature(2.0, 1.0, omega, 1.0).unwrap()
}

/// Fourth-order central-difference gradient, `G[i][j] = ∂ⱼuᵢ`.
fn fd_gradient(u: &dyn Fn([f64; 2]) -> Vec2, x: [f64; 2], h: f64) -> Mat2 {
    let mut g = [[c64::new(0.0, 0.0); 2]; 2];
    for j in 0..2 {
        let at = |o: f64| {
            let mut y = x;
            y[j] += o * h;
            u(y)
        };
        let (a, b, c, d) = (at(-2.0), at(-1.0), at(1.0), at(2.0));
        for i in 0..2 {
            g[i][j] = (a[i] - 8.0 * b[i] + 8.0 * c[i] - d[i]) / (12.0 * h);
        }
    }
    g
}

fn mat_err(a: &Mat2, b: &Mat2) -> f64 {
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            num = num.max((a[i][j] - b[i][j]).norm());
            den = den.max(b[i][j].norm());
        }
    }
    num / den
}

#[test]
fn manufactured_field_solves_navier() {
    let m = medium(10.0);
    let c = discretize(ShapeKind::Kite, &[], 128).unwrap();
    let sol = ManufacturedSolution::at_centroid(&m, &c).unwrap();
    for x in [[2.0, 0.3], [-1.5, 1.7], [0.2, -3.0]] {
        let r = navier_residual(&|y| sol.displacement(y), &m, x).unwrap();
        assert!(r < NAVIER_TOL, "{x:?}: {r:e}");
        let g = fd_gradient(&|y| sol.displacement(y).unwrap(), x, 1e-3);
        assert!(mat_err(&g, &sol.gradient(x).unwrap()) < 1e-9);
    }
    IncidentField::from_manufactured(&sol).unwrap();
}

#[test]
fn decomposition_matches_div_and_curl() {
    let m = medium(7.0);
    let c = discretize(ShapeKind::Circle, &[], 64).unwrap();
    let sol = ManufacturedSolution::new(&m, [0.1, -0.2], &c).unwrap();
    for x in [[1.8, 0.0], [-0.7, 2.2]] {
        let g = sol.gradient(x).unwrap();
        let (up, us) = sol.potentials(x).unwrap();
        // div ∇u_p = −k_p² u_p, curl curl⃗ u_s = −Δu_s = k_s² u_s
        let div = g[0][0] + g[1][1];
        let curl = g[1][0] - g[0][1];
        assert!((div + m.kp * m.kp * up).norm() < 1e-12 * div.norm());
        assert!((curl - m.ks * m.ks * us).norm() < 1e-12 * curl.norm());
    }
}

#[test]
fn wrong_wavenumber_fails_navier() {
    let m = medium(10.0);
    let d = [0.6, 0.8];
    // longitudinal polarization travelling at the shear speed
    let bad = |x: [f64; 2]| -> helmscatter::Result<Vec2> {
        let e = c64::from_polar(1.0, m.ks * (x[0] * d[0] + x[1] * d[1]));
        Ok([e * d[0], e * d[1]])
    };
    assert!(navier_residual(&bad, &m, [0.3, 0.1]).unwrap() > 0.1);
}

#[test]
fn source_placement_is_validated() {
    let m = medium(10.0);
    let c = discretize(ShapeKind::Circle, &[], 64).unwrap();
    assert!(ManufacturedSolution::new(&m, [2.0, 0.0], &c).is_err());
    assert!(ManufacturedSolution::new(&m, [0.9, 0.0], &c).is_err());
    assert!(IncidentField::plane_wave(&m, [1.0, 1.0], [1.0, 0.0]).is_err());
}

#[test]
fn far_field_matches_large_radius_asymptotics() {
    let m = medium(10.0);
    let c = discretize(ShapeKind::Circle, &[], 64).unwrap();
    let sol = ManufacturedSolution::new(&m, [0.2, 0.1], &c).unwrap();
    let dirs = directions(12);
    let ff = sol.far_field(&dirs);
    let r = 1e4;
    for (d, pat) in dirs.iter().zip(&ff) {
        let u = sol.displacement([r * d[0], r * d[1]]).unwrap();
        let q = rotate_q(*d);
        // radial part travels with k_p, tangential with k_s
        let ur = u[0] * d[0] + u[1] * d[1];
        let ut = u[0] * q[0] + u[1] * q[1];
        let pr = pat[0] * d[0] + pat[1] * d[1];
        let pt = pat[0] * q[0] + pat[1] * q[1];
        let er = ur * r.sqrt() * c64::from_polar(1.0, -m.kp * r);
        let et = ut * r.sqrt() * c64::from_polar(1.0, -m.ks * r);
        assert!((er - pr).norm() < 1e-3 * pr.norm(), "{d:?}: {er} vs {pr}");
        assert!((et - pt).norm() < 1e-3 * pt.norm(), "{d:?}: {et} vs {pt}");
    }
}

#[test]
fn traction_of_a_dilation() {
    let m = medium(1.0);
    let one = c64::new(1.0, 0.0);
    let zero = c64::new(0.0, 0.0);
    let n = [0.6, -0.8];
    let t = traction_from_gradient(&m, &[[one, zero], [zero, one]], n);
    let s = 2.0 * m.lambda + 2.0 * m.mu;
    assert!((t[0] - s * n[0]).norm() < 1e-15 && (t[1] - s * n[1]).norm() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn plane_waves_solve_navier(dir in 0.0f64..6.3, pol in 0.0f64..6.3, omega in 1.0f64..40.0) {
        let m = medium(omega);
        let f = IncidentField::plane_wave_angles(&m, dir, pol).unwrap();
        let x = [0.37, -0.81];
        let g = fd_gradient(&|y| f.displacement(y).unwrap(), x, 1e-3 / m.ks);
        prop_assert!(mat_err(&g, &f.gradient(x).unwrap()) < 1e-8);
        prop_assert!(navier_residual(&|y| f.displacement(y), &m, x).unwrap() < NAVIER_TOL);
    }
}
