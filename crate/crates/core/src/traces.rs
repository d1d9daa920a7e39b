//! Gradient and Hessian traces of the single and double layer potentials,
//! written as compositions of the discrete BIOs with `∂ₜ` and pointwise
//! multiplications by `n`, `t` and `κ`.
//!
//! Vector-density actions such as `n·Kᵀ(φ t)` are realised componentwise:
//! `Σ_c diag(n_c) Kᵀ diag(t_c)`.
//!
//! Two independent constructions are provided for the Hessian blocks. The
//! closed forms (`nn`, `nt`) follow the trace theorems directly; the
//! differentiated forms (`tt`, `tn`) come from tangential differentiation of
//! the gradient traces using `∂ₜt = −κn` and `∂ₜn = κt`:
//! `tt = ∂ₜ(∂ₜu) + κ ∂ₙu` and `tn = ∂ₜ(∂ₙu) − κ ∂ₜu`.

use crate::bio::{dot_sandwich, tangential_derivative, BioSet, PotentialKind};
use crate::geometry::Curve;
use crate::linalg::{add_scalar_identity, c64, col_scale, row_scale, scale, CMat};

/// Exterior gradient traces `∂ₙ` and `∂ₜ` of SL and DL.
#[derive(Debug, Clone)]
pub struct GradTraces {
    pub dn_sl: CMat,
    pub dt_sl: CMat,
    pub dn_dl: CMat,
    pub dt_dl: CMat,
}

/// Exterior Hessian traces of one potential kind.
#[derive(Debug, Clone)]
pub struct HessTraces {
    pub kind: PotentialKind,
    pub k: c64,
    /// `nᵀ(Hes u)n`, closed form.
    pub nn: CMat,
    /// `nᵀ(Hes u)t`, closed form.
    pub nt: CMat,
    /// `tᵀ(Hes u)t`, by differentiation of the gradient traces.
    pub tt: CMat,
    /// `tᵀ(Hes u)n`, by differentiation of the gradient traces.
    pub tn: CMat,
    /// Dirichlet trace `γu` (`V` for SL, `½I + K` for DL).
    pub trace: CMat,
}

struct Frame {
    d: CMat,
    kappa: Vec<f64>,
    n: [Vec<f64>; 2],
    t: [Vec<f64>; 2],
}

impl Frame {
    fn new(curve: &Curve) -> Self {
        Frame {
            d: tangential_derivative(curve),
            kappa: curve.kappa.clone(),
            n: [curve.normal_component(0), curve.normal_component(1)],
            t: [curve.tangent_component(0), curve.tangent_component(1)],
        }
    }

    fn nn(&self, op: &CMat) -> CMat {
        dot_sandwich([&self.n[0], &self.n[1]], op, [&self.n[0], &self.n[1]])
    }

    fn nt(&self, op: &CMat) -> CMat {
        dot_sandwich([&self.n[0], &self.n[1]], op, [&self.t[0], &self.t[1]])
    }

    fn tn(&self, op: &CMat) -> CMat {
        dot_sandwich([&self.t[0], &self.t[1]], op, [&self.n[0], &self.n[1]])
    }

    fn tt(&self, op: &CMat) -> CMat {
        dot_sandwich([&self.t[0], &self.t[1]], op, [&self.t[0], &self.t[1]])
    }

    fn kappa_left(&self, op: &CMat) -> CMat {
        row_scale(&self.kappa, op)
    }
}

fn grad_sl(b: &BioSet, f: &Frame) -> (CMat, CMat) {
    let dn = add_scalar_identity(&b.kt, c64::new(-0.5, 0.0));
    let dt = &f.d * &b.v;
    (dn, dt)
}

fn grad_dl(b: &BioSet, f: &Frame) -> (CMat, CMat) {
    let dn = b.w.clone();
    let k2 = b.k * b.k;
    let half_d = scale(&f.d, c64::new(0.5, 0.0));
    let tvn = scale(&f.tn(&b.v), k2);
    let ktd = &b.kt * &f.d;
    let dt = &(&half_d + &tvn) - &ktd;
    (dn, dt)
}

/// `∂ₙSL = −½I + Kᵀ`, `∂ₜSL = DV`, `∂ₙDL = W`, `∂ₜDL = ½D + k² t·V(n·) − KᵀD`.
pub fn build_grad_traces(bios: &BioSet, curve: &Curve) -> GradTraces {
    let f = Frame::new(curve);
    let (dn_sl, dt_sl) = grad_sl(bios, &f);
    let (dn_dl, dt_dl) = grad_dl(bios, &f);
    GradTraces { dn_sl, dt_sl, dn_dl, dt_dl }
}

/// Hessian trace blocks of SL or DL at the wavenumber of `bios`.
pub fn build_hess_traces(kind: PotentialKind, bios: &BioSet, curve: &Curve) -> HessTraces {
    let f = Frame::new(curve);
    let k2 = bios.k * bios.k;
    let (gn, gt, trace) = match kind {
        PotentialKind::Single => {
            let (gn, gt) = grad_sl(bios, &f);
            (gn, gt, bios.v.clone())
        }
        PotentialKind::Double => {
            let (gn, gt) = grad_dl(bios, &f);
            (gn, gt, add_scalar_identity(&bios.k_dl, c64::new(0.5, 0.0)))
        }
    };
    let tt = &(&f.d * &gt) + &f.kappa_left(&gn);
    let tn = &(&f.d * &gn) - &f.kappa_left(&gt);

    let (nn, nt) = match kind {
        PotentialKind::Single => {
            // bracket B = Kᵀ(Dφ t) − Kᵀ(κφ n) − W(φ n)
            let n_part = &(&(&f.nt(&bios.kt) * &f.d) - &col_scale(&f.nn(&bios.kt), &f.kappa)) - &f.nn(&bios.w);
            let t_part = &(&(&f.tt(&bios.kt) * &f.d) - &col_scale(&f.tn(&bios.kt), &f.kappa)) - &f.tn(&bios.w);
            let half_kappa = CMat::from_fn(curve.n, curve.n, |i, j| {
                if i == j {
                    c64::new(0.5 * f.kappa[i], 0.0)
                } else {
                    c64::new(0.0, 0.0)
                }
            });
            let nn = &half_kappa + &n_part;
            let nt = &scale(&f.d, c64::new(-0.5, 0.0)) + &t_part;
            (nn, nt)
        }
        PotentialKind::Double => {
            // bracket C = k²Kᵀ(φn) + Kᵀ(D²φ n) + Kᵀ(κDφ t) + W(Dφ t)
            let d2 = &f.d * &f.d;
            let kd = row_scale(&f.kappa, &f.d);
            let bracket = |side: &dyn Fn(&CMat) -> CMat, side_t: &dyn Fn(&CMat) -> CMat| -> CMat {
                let a = scale(&side(&bios.kt), k2);
                let b = &side(&bios.kt) * &d2;
                let c = &side_t(&bios.kt) * &kd;
                let d = &side_t(&bios.w) * &f.d;
                &(&a + &b) + &(&c + &d)
            };
            let cn = bracket(&|op| f.nn(op), &|op| f.nt(op));
            let ct = bracket(&|op| f.tn(op), &|op| f.tt(op));
            let nn = &add_scalar_identity(&scale(&d2, c64::new(-0.5, 0.0)), -0.5 * k2) + &cn;
            let nt = &scale(&kd, c64::new(-0.5, 0.0)) + &ct;
            (nn, nt)
        }
    };
    HessTraces { kind, k: bios.k, nn, nt, tt, tn, trace }
}
