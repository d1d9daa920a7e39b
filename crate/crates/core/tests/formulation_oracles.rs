mod common;

use common::circle_eigs;
use helmscatter::fields::{directions, pattern_rel_error, IncidentField, ManufacturedSolution, ScatteredField};
use helmscatter::formulations::*;
use helmscatter::geometry::{discretize, ShapeKind};
use helmscatter::linalg::c64;
use helmscatter::solver::gmres;
use helmscatter::spectral::{dirichlet_cfier_principal, mode_action};
use helmscatter::ElasticMedium;
use proptest::prelude::*;

const HALF: c64 = c64::new(0.5, 0.0);

fn max_entry_err(a: [[c64; 2]; 2], b: [[c64; 2]; 2]) -> f64 {
    let mut e = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            e = e.max((a[i][j] - b[i][j]).norm());
        }
    }
    e
}

#[test]
fn circle_block_symbols_match_bessel_oracle() {
    let m = ElasticMedium::with_curvature(2.0, 1.0, 5.0, 1.0).unwrap();
    let c = discretize(ShapeKind::Circle, &[], 128).unwrap();
    let ctx = OperatorContext::new(&m, &c, false).unwrap();
    let (adl, asl) = (ctx.a_dl().matrix, ctx.a_sl().matrix);
    for n in -16i64..=16 {
        let (vp, kp, wp) = circle_eigs(m.kp, n);
        let (vs, ks, ws) = circle_eigs(m.ks, n);
        let i_n = c64::new(0.0, n as f64);
        let want_dl = [[wp, i_n * (HALF + ks)], [i_n * (HALF + kp), -ws]];
        let want_sl = [[kp - HALF, i_n * vs], [i_n * vp, HALF - ks]];
        let scale = 1.0 + (n * n) as f64;
        assert!(max_entry_err(mode_action(&adl, n), want_dl) < 1e-10 * scale, "A_DL n={n}");
        assert!(max_entry_err(mode_action(&asl, n), want_sl) < 1e-10 * scale, "A_SL n={n}");
    }
}

#[test]
fn every_formulation_recovers_a_point_source() {
    let m = ElasticMedium::with_curvature(2.0, 1.0, 5.0, 1.0).unwrap();
    let c = discretize(ShapeKind::Circle, &[], 96).unwrap();
    let sol = ManufacturedSolution::new(&m, [0.25, -0.1], &c).unwrap();
    let inc = IncidentField::from_manufactured(&sol).unwrap();
    let pts: Vec<[f64; 2]> = directions(8).iter().map(|d| [1.7 * d[0], 1.7 * d[1]]).collect();
    let exact: Vec<_> = pts.iter().map(|&x| sol.displacement(x).unwrap()).collect();
    let dirs = directions(32);
    let ids = FORMULATION_IDS.iter().copied().chain(["dirichlet.cfie.perfield", "neumann.cfie.perfield"]);
    for id in ids {
        let f: Formulation = id.parse().unwrap();
        let sys = assemble_system(f, &m, &c).unwrap();
        let rhs = assemble_rhs(f.boundary(), &inc, &c).unwrap();
        let kr = gmres(&sys, &rhs, 1e-12, 2 * c.n).unwrap();
        assert!(kr.converged, "{id}");
        let rep = sys.representation(&kr.solution.stacked());
        let field = ScatteredField::new(&m, &c, &rep);
        let err = pattern_rel_error(&field.displacement(&pts).unwrap(), &exact);
        let ff = pattern_rel_error(&field.far_field(&dirs), &sol.far_field(&dirs));
        assert!(err < 1e-8 && ff < 1e-8, "{id}: field {err:e}, far field {ff:e}");
    }
}

#[test]
fn zero_incidence_gives_zero_density() {
    let m = ElasticMedium::with_curvature(2.0, 1.0, 5.0, 1.0).unwrap();
    let c = discretize(ShapeKind::Kite, &[], 64).unwrap();
    let sys = assemble_system("neumann.cfier.rn".parse().unwrap(), &m, &c).unwrap();
    let kr = gmres(&sys, &DensityPair::zeros(64), 1e-8, 10).unwrap();
    assert_eq!(kr.iterations, 0);
    assert!(kr.solution.stacked().iter().all(|v| v.norm() == 0.0));
}

#[test]
fn dirichlet_cfier_tends_to_its_principal_symbol() {
    let m = ElasticMedium::with_curvature(2.0, 1.0, 5.0, 1.0).unwrap();
    let c = discretize(ShapeKind::Circle, &[], 256).unwrap();
    let sys = assemble_system("dirichlet.cfier.rd".parse().unwrap(), &m, &c).unwrap();
    let a = sys.matrix();
    let p = dirichlet_cfier_principal(&m);
    let errs: Vec<f64> = [10i64, 20, 40].iter().map(|&n| max_entry_err(mode_action(&a, n), p.symbol(n))).collect();
    assert!(errs[2] < errs[1] && errs[1] < errs[0] && errs[2] < 0.05, "{errs:?}");
}

#[test]
fn mismatched_operator_context_is_an_error() {
    let m = ElasticMedium::with_curvature(2.0, 1.0, 5.0, 1.0).unwrap();
    let c = discretize(ShapeKind::Circle, &[], 32).unwrap();
    let ctx = OperatorContext::new(&m, &c, false).unwrap();
    assert!(system_from_context("dirichlet.cfier.rd2".parse().unwrap(), &ctx).is_err());
    assert!(system_from_context("dirichlet.cfier.rd".parse().unwrap(), &ctx).is_err());
    assert!(system_from_context("dirichlet.cfier.ps".parse().unwrap(), &ctx).is_ok());
    assert!(system_from_context("neumann.cfie".parse().unwrap(), &ctx).is_ok());
}

proptest! {
    #[test]
    fn density_pairs_stack_and_unstack(v in proptest::collection::vec(-1.0f64..1.0, 2..40)) {
        let n = v.len();
        let p: Vec<c64> = v.iter().map(|&x| c64::new(x, -x)).collect();
        let s: Vec<c64> = v.iter().map(|&x| c64::new(2.0 * x, 0.5)).collect();
        let d = DensityPair::new(p.clone(), s.clone()).unwrap();
        let back = DensityPair::from_stacked(&d.stacked());
        prop_assert_eq!(back.n(), n);
        prop_assert_eq!(back.p, p);
        prop_assert_eq!(back.s, s);
    }
}
