//! Incident fields, manufactured exact solutions and elastic far fields.
//!
//! Gradients are stored as `G[i][j] = ∂ⱼuᵢ`. Tractions use
//! `σ(u) = λ(div u)I + μ(∇u + ∇uᵀ)` applied to the normal.

use crate::bio::{eval_potential_gradient, far_field, PotentialKind};
use crate::error::{Error, Result};
use crate::formulations::Representation;
use crate::geometry::{rotate_q, Curve};
use crate::linalg::{c64, I, ZERO};
use crate::medium::ElasticMedium;
use crate::specfun::hankel1_01;
use std::f64::consts::PI;

pub type Vec2 = [c64; 2];
pub type Mat2 = [[c64; 2]; 2];

/// Relative tolerance of the finite-difference Navier check.
pub const NAVIER_TOL: f64 = 1e-6;

/// `σ(u)n` from a displacement gradient.
pub fn traction_from_gradient(medium: &ElasticMedium, g: &Mat2, n: [f64; 2]) -> Vec2 {
    let div = g[0][0] + g[1][1];
    let mut out = [ZERO; 2];
    for i in 0..2 {
        let mut acc = medium.lambda * div * n[i];
        for j in 0..2 {
            acc += medium.mu * (g[i][j] + g[j][i]) * n[j];
        }
        out[i] = acc;
    }
    out
}

/// `Φ_k(x)`, `∇Φ_k(x)` and the Hessian of `Φ_k = (i/4)H₀(k|x|)`.
pub fn fundamental_derivatives(k: f64, x: [f64; 2]) -> Result<(c64, Vec2, Mat2)> {
    let r = x[0].hypot(x[1]);
    if r == 0.0 {
        return Err(Error::Domain("fundamental solution evaluated at its source".into()));
    }
    let kc = c64::new(k, 0.0);
    let (h0, h1) = hankel1_01(kc * r)?;
    let phi = I / 4.0 * h0;
    let f = -I * k / 4.0 * h1 / r;
    let grad = [f * x[0], f * x[1]];
    // H₁'(z) = H₀(z) − H₁(z)/z
    let h1p = h0 - h1 / (kc * r);
    let mut hess = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let xij = x[i] * x[j];
            let delta = if i == j { 1.0 } else { 0.0 };
            hess[i][j] = -I * k / 4.0 * (k * h1p * xij / (r * r) + h1 * (delta / r - xij / (r * r * r)));
        }
    }
    Ok((phi, grad, hess))
}

/// Interior point-source pair `u_p = Φ_{k_p}(·−z)`, `u_s = Φ_{k_s}(·−z)` and
/// the radiating field `u = ∇u_p + curl⃗ u_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedSolution {
    pub medium: ElasticMedium,
    pub z: [f64; 2],
}

/// Winding-number test against the node polygon.
fn inside_nodes(curve: &Curve, p: [f64; 2]) -> bool {
    let mut inside = false;
    let n = curve.n;
    for i in 0..n {
        let a = curve.x[i];
        let b = curve.x[(i + 1) % n];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let xc = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < xc {
                inside = !inside;
            }
        }
    }
    inside
}

impl ManufacturedSolution {
    /// `z` must lie inside `curve` at distance at least 0.2 from its nodes.
    pub fn new(medium: &ElasticMedium, z: [f64; 2], curve: &Curve) -> Result<Self> {
        if !inside_nodes(curve, z) {
            return Err(Error::Domain(format!("source point {z:?} is not inside the scatterer")));
        }
        let dist = curve.x.iter().map(|x| (x[0] - z[0]).hypot(x[1] - z[1])).fold(f64::INFINITY, f64::min);
        if dist < 0.2 {
            return Err(Error::Domain(format!("source point {z:?} is within {dist:.3} of the boundary (need 0.2)")));
        }
        Ok(ManufacturedSolution { medium: *medium, z })
    }

    /// Source at the node centroid.
    pub fn at_centroid(medium: &ElasticMedium, curve: &Curve) -> Result<Self> {
        let n = curve.n as f64;
        let cx = curve.x.iter().map(|x| x[0]).sum::<f64>() / n;
        let cy = curve.x.iter().map(|x| x[1]).sum::<f64>() / n;
        Self::new(medium, [cx, cy], curve)
    }

    fn rel(&self, x: [f64; 2]) -> [f64; 2] {
        [x[0] - self.z[0], x[1] - self.z[1]]
    }

    /// `(u_p, u_s)` at `x`.
    pub fn potentials(&self, x: [f64; 2]) -> Result<(c64, c64)> {
        let r = self.rel(x);
        Ok((fundamental_derivatives(self.medium.kp, r)?.0, fundamental_derivatives(self.medium.ks, r)?.0))
    }

    /// `∇u_p` at `x`.
    pub fn grad_up(&self, x: [f64; 2]) -> Result<Vec2> {
        Ok(fundamental_derivatives(self.medium.kp, self.rel(x))?.1)
    }

    pub fn displacement(&self, x: [f64; 2]) -> Result<Vec2> {
        let r = self.rel(x);
        let (_, gp, _) = fundamental_derivatives(self.medium.kp, r)?;
        let (_, gs, _) = fundamental_derivatives(self.medium.ks, r)?;
        Ok([gp[0] + gs[1], gp[1] - gs[0]])
    }

    pub fn gradient(&self, x: [f64; 2]) -> Result<Mat2> {
        let r = self.rel(x);
        let (_, _, hp) = fundamental_derivatives(self.medium.kp, r)?;
        let (_, _, hs) = fundamental_derivatives(self.medium.ks, r)?;
        // u = (∂₁u_p + ∂₂u_s, ∂₂u_p − ∂₁u_s)
        let mut g = [[ZERO; 2]; 2];
        for j in 0..2 {
            g[0][j] = hp[0][j] + hs[1][j];
            g[1][j] = hp[1][j] - hs[0][j];
        }
        Ok(g)
    }

    /// Exact far-field pattern of `u` in the directions `x̂`.
    pub fn far_field(&self, directions: &[[f64; 2]]) -> Vec<Vec2> {
        let m = &self.medium;
        let pat = |k: f64, d: &[f64; 2]| {
            c64::from_polar(1.0, PI / 4.0) / (8.0 * PI * k).sqrt()
                * c64::from_polar(1.0, -k * (d[0] * self.z[0] + d[1] * self.z[1]))
        };
        let up: Vec<c64> = directions.iter().map(|d| pat(m.kp, d)).collect();
        let us: Vec<c64> = directions.iter().map(|d| pat(m.ks, d)).collect();
        elastic_far_field(m, &up, &us, directions)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Plane { d: [f64; 2], p: [f64; 2] },
    /// `sign · u` of a manufactured solution.
    Point { sol: ManufacturedSolution, sign: f64 },
}

/// An incident displacement field with closed-form gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentField {
    pub medium: ElasticMedium,
    kind: Kind,
}

impl IncidentField {
    /// Plane wave `(1/(λ+2μ))e^{ik_p x·d}(d·p)d + (1/μ)e^{ik_s x·d}(d·Qp)Qd`.
    pub fn plane_wave(medium: &ElasticMedium, d: [f64; 2], p: [f64; 2]) -> Result<Self> {
        let nd = d[0].hypot(d[1]);
        if (nd - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("plane-wave direction must have unit length, |d| = {nd}")));
        }
        let f = IncidentField { medium: *medium, kind: Kind::Plane { d, p } };
        f.check_navier()?;
        Ok(f)
    }

    /// Plane wave from direction and polarization angles (radians).
    pub fn plane_wave_angles(medium: &ElasticMedium, direction: f64, polarization: f64) -> Result<Self> {
        Self::plane_wave(
            medium,
            [direction.cos(), direction.sin()],
            [polarization.cos(), polarization.sin()],
        )
    }

    /// `u^inc = −u` so that the scattered field equals the manufactured `u`.
    pub fn from_manufactured(sol: &ManufacturedSolution) -> Result<Self> {
        let f = IncidentField { medium: sol.medium, kind: Kind::Point { sol: *sol, sign: -1.0 } };
        f.check_navier()?;
        Ok(f)
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            Kind::Plane { d, p } => {
                let dp = d[0] * p[0] + d[1] * p[1];
                let dqp = d[0] * p[1] - d[1] * p[0];
                if dqp.abs() < 1e-14 {
                    "plane-p"
                } else if dp.abs() < 1e-14 {
                    "plane-s"
                } else {
                    "plane"
                }
            }
            Kind::Point { .. } => "point",
        }
    }

    fn plane_parts(&self, d: [f64; 2], p: [f64; 2], x: [f64; 2]) -> (c64, c64) {
        let m = &self.medium;
        let xd = x[0] * d[0] + x[1] * d[1];
        let dp = d[0] * p[0] + d[1] * p[1];
        let qp = rotate_q(p);
        let dqp = d[0] * qp[0] + d[1] * qp[1];
        let ap = c64::from_polar(dp / (m.lambda + 2.0 * m.mu), m.kp * xd);
        let as_ = c64::from_polar(dqp / m.mu, m.ks * xd);
        (ap, as_)
    }

    pub fn displacement(&self, x: [f64; 2]) -> Result<Vec2> {
        match self.kind {
            Kind::Plane { d, p } => {
                let (ap, as_) = self.plane_parts(d, p, x);
                let qd = rotate_q(d);
                Ok([ap * d[0] + as_ * qd[0], ap * d[1] + as_ * qd[1]])
            }
            Kind::Point { sol, sign } => {
                let u = sol.displacement(x)?;
                Ok([u[0] * sign, u[1] * sign])
            }
        }
    }

    pub fn gradient(&self, x: [f64; 2]) -> Result<Mat2> {
        match self.kind {
            Kind::Plane { d, p } => {
                let (ap, as_) = self.plane_parts(d, p, x);
                let qd = rotate_q(d);
                let (kp, ks) = (self.medium.kp, self.medium.ks);
                let mut g = [[ZERO; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        g[i][j] = I * d[j] * (kp * ap * d[i] + ks * as_ * qd[i]);
                    }
                }
                Ok(g)
            }
            Kind::Point { sol, sign } => {
                let g = sol.gradient(x)?;
                Ok([[g[0][0] * sign, g[0][1] * sign], [g[1][0] * sign, g[1][1] * sign]])
            }
        }
    }

    /// `σ(u)n` at `x`.
    pub fn traction(&self, x: [f64; 2], n: [f64; 2]) -> Result<Vec2> {
        Ok(traction_from_gradient(&self.medium, &self.gradient(x)?, n))
    }

    fn probe_points(&self) -> Vec<[f64; 2]> {
        let (c, r) = match self.kind {
            Kind::Plane { .. } => ([0.0, 0.0], 1.3),
            Kind::Point { sol, .. } => (sol.z, 3.7),
        };
        (0..6)
            .map(|j| {
                let a = 0.9 + 2.0 * PI * j as f64 / 6.0;
                [c[0] + r * a.cos(), c[1] + r * a.sin()]
            })
            .collect()
    }

    /// Finite-difference Navier residual at a few fixed points; errors if any
    /// exceeds [`NAVIER_TOL`].
    pub fn check_navier(&self) -> Result<()> {
        for x in self.probe_points() {
            let res = navier_residual(&|y| self.displacement(y), &self.medium, x)?;
            if !(res <= NAVIER_TOL) {
                return Err(Error::Numerical(format!(
                    "incident field fails the Navier equation at {x:?}: relative residual {res:.3e}"
                )));
            }
        }
        Ok(())
    }
}

/// Relative residual of `μΔu + (λ+μ)∇(div u) + ω²u` at `x`, with fourth-order
/// central differences. The step is tied to the shear wavelength.
pub fn navier_residual(u: &dyn Fn([f64; 2]) -> Result<Vec2>, medium: &ElasticMedium, x: [f64; 2]) -> Result<f64> {
    let h = 0.01 / medium.ks.max(1.0);
    let at = |a: f64, b: f64| u([x[0] + a * h, x[1] + b * h]);
    let w1 = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
    let w2 = [(-2.0, -1.0), (-1.0, 16.0), (0.0, -30.0), (1.0, 16.0), (2.0, -1.0)];
    let mut dxx = [ZERO; 2];
    let mut dyy = [ZERO; 2];
    let mut dxy = [ZERO; 2];
    for &(o, w) in &w2 {
        let a = at(o, 0.0)?;
        let b = at(0.0, o)?;
        for c in 0..2 {
            dxx[c] += w * a[c];
            dyy[c] += w * b[c];
        }
    }
    for &(oi, wi) in &w1 {
        for &(oj, wj) in &w1 {
            let a = at(oi, oj)?;
            for c in 0..2 {
                dxy[c] += wi * wj * a[c];
            }
        }
    }
    for c in 0..2 {
        dxx[c] /= 12.0 * h * h;
        dyy[c] /= 12.0 * h * h;
        dxy[c] /= 144.0 * h * h;
    }
    let u0 = u(x)?;
    let m = medium;
    let lap = [dxx[0] + dyy[0], dxx[1] + dyy[1]];
    // ∇div u = (∂₁₁u₁ + ∂₁₂u₂, ∂₁₂u₁ + ∂₂₂u₂)
    let gdiv = [dxx[0] + dxy[1], dxy[0] + dyy[1]];
    let w2 = m.omega * m.omega;
    let mut res = 0.0f64;
    let mut scale = 0.0f64;
    for c in 0..2 {
        let terms = [m.mu * lap[c], (m.lambda + m.mu) * gdiv[c], w2 * u0[c]];
        res += (terms[0] + terms[1] + terms[2]).norm_sqr();
        scale += terms.iter().map(|t| t.norm_sqr()).sum::<f64>();
    }
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok((res / scale).sqrt())
}

/// `ik_p u_p∞ x̂ + ik_s u_s∞ Qx̂`.
pub fn elastic_far_field(medium: &ElasticMedium, up: &[c64], us: &[c64], directions: &[[f64; 2]]) -> Vec<Vec2> {
    directions
        .iter()
        .zip(up.iter().zip(us))
        .map(|(d, (a, b))| {
            let q = rotate_q(*d);
            let pa = I * medium.kp * a;
            let sb = I * medium.ks * b;
            [pa * d[0] + sb * q[0], pa * d[1] + sb * q[1]]
        })
        .collect()
}

/// Scattered field `u = ∇u_p + curl⃗ u_s` of a layer-potential representation.
#[derive(Debug, Clone)]
pub struct ScatteredField<'a> {
    pub medium: ElasticMedium,
    pub curve: &'a Curve,
    pub rep: &'a Representation,
}

impl<'a> ScatteredField<'a> {
    pub fn new(medium: &ElasticMedium, curve: &'a Curve, rep: &'a Representation) -> Self {
        ScatteredField { medium: *medium, curve, rep }
    }

    fn potential_gradients(&self, k: f64, dl: &[c64], sl: &[c64], points: &[[f64; 2]]) -> Result<Vec<Vec2>> {
        let kc = c64::new(k, 0.0);
        let a = eval_potential_gradient(PotentialKind::Double, kc, self.curve, dl, points)?;
        let b = eval_potential_gradient(PotentialKind::Single, kc, self.curve, sl, points)?;
        Ok(a.iter().zip(&b).map(|(x, y)| [x[0] + y[0], x[1] + y[1]]).collect())
    }

    /// Displacement at exterior points.
    pub fn displacement(&self, points: &[[f64; 2]]) -> Result<Vec<Vec2>> {
        let gp = self.potential_gradients(self.medium.kp, &self.rep.dl.p, &self.rep.sl.p, points)?;
        let gs = self.potential_gradients(self.medium.ks, &self.rep.dl.s, &self.rep.sl.s, points)?;
        Ok(gp.iter().zip(&gs).map(|(p, s)| [p[0] + s[1], p[1] - s[0]]).collect())
    }

    /// Helmholtz far fields `(u_p∞, u_s∞)`.
    pub fn potential_far_fields(&self, directions: &[[f64; 2]]) -> (Vec<c64>, Vec<c64>) {
        let ff = |k: f64, dl: &[c64], sl: &[c64]| -> Vec<c64> {
            let a = far_field(PotentialKind::Double, k, self.curve, dl, directions);
            let b = far_field(PotentialKind::Single, k, self.curve, sl, directions);
            a.iter().zip(&b).map(|(x, y)| x + y).collect()
        };
        (
            ff(self.medium.kp, &self.rep.dl.p, &self.rep.sl.p),
            ff(self.medium.ks, &self.rep.dl.s, &self.rep.sl.s),
        )
    }

    /// Elastic far-field pattern.
    pub fn far_field(&self, directions: &[[f64; 2]]) -> Vec<Vec2> {
        let (up, us) = self.potential_far_fields(directions);
        elastic_far_field(&self.medium, &up, &us, directions)
    }
}

/// `n` equispaced unit directions starting at angle 0.
pub fn directions(n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / n as f64;
            [a.cos(), a.sin()]
        })
        .collect()
}

/// Relative max-norm distance between two vector patterns.
pub fn pattern_rel_error(a: &[Vec2], b: &[Vec2]) -> f64 {
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        let d = ((x[0] - y[0]).norm_sqr() + (x[1] - y[1]).norm_sqr()).sqrt();
        num = num.max(d);
        den = den.max((y[0].norm_sqr() + y[1].norm_sqr()).sqrt());
    }
    if den == 0.0 {
        num
    } else {
        num / den
    }
}
