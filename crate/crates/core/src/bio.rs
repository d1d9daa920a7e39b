//! Nyström discretisation of the Helmholtz boundary integral operators.
//!
//! With `Φ_k(x) = (i/4) H₀⁽¹⁾(k|x|)`:
//!
//! * `V φ = ∫ Φ_k(x − y) φ(y) dy`
//! * `K φ = ∫ ∂_{n(y)} Φ_k(x − y) φ(y) dy`
//! * `Kᵀ φ = ∫ ∂_{n(x)} Φ_k(x − y) φ(y) dy`
//! * `W φ = ∂_n DL_k φ`, assembled through the Maue identity
//!   `W = ∂ₜ V ∂ₜ + k² n·V(n φ)`.
//!
//! Logarithmic kernels are split as `M₁ log(4 sin²((s−σ)/2)) + M₂` and
//! integrated with the trigonometric product weights; the smooth part uses
//! the trapezoidal rule.
//!
//! For complex `k` the coefficient `M₁ ∝ J₀(k r)` grows like `e^{Im k·r}`
//! while the kernel itself decays, so a global split cancels catastrophically
//! once `Im k·diam` is large. There `M₁` is multiplied by a window `χ(s−σ)`
//! that is flat at the diagonal and negligible beyond `Im k·r ≈ 12`.

use crate::error::{Error, Result};
use crate::geometry::Curve;
use crate::linalg::{c64, col_scale, row_scale, CMat, I, ZERO};
use crate::spectral::differentiation_matrix;
use crate::specfun::{besselj_01, hankel1_01};
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BioKind {
    V,
    K,
    Kt,
    W,
}

impl fmt::Display for BioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BioKind::V => "V",
            BioKind::K => "K",
            BioKind::Kt => "Kt",
            BioKind::W => "W",
        };
        f.write_str(s)
    }
}

/// A dense matrix tagged with the operator it discretises.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub label: String,
    pub k: c64,
    pub matrix: CMat,
}

impl DiscreteOperator {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, x: &[c64]) -> Vec<c64> {
        crate::linalg::matvec(&self.matrix, x)
    }
}

/// The four boundary operators at one wavenumber.
#[derive(Debug, Clone)]
pub struct BioSet {
    pub k: c64,
    pub v: CMat,
    pub k_dl: CMat,
    pub kt: CMat,
    pub w: CMat,
}

impl BioSet {
    pub fn get(&self, kind: BioKind) -> &CMat {
        match kind {
            BioKind::V => &self.v,
            BioKind::K => &self.k_dl,
            BioKind::Kt => &self.kt,
            BioKind::W => &self.w,
        }
    }

    pub fn operator(&self, kind: BioKind) -> DiscreteOperator {
        DiscreteOperator { label: kind.to_string(), k: self.k, matrix: self.get(kind).clone() }
    }
}

fn weight_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<f64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Log-quadrature weights `R(d)` for node offsets `d = (i − j) mod N`:
/// `∫₀^{2π} log(4 sin²((s_i − σ)/2)) f(σ) dσ ≈ Σ_j R((i − j) mod N) f(s_j)`.
pub fn log_weights(n: usize) -> Arc<Vec<f64>> {
    if let Some(w) = weight_cache().lock().expect("weight cache poisoned").get(&n) {
        return w.clone();
    }
    let nf = n as f64;
    let h = 2.0 * PI / nf;
    let half = n / 2;
    let w: Vec<f64> = (0..n)
        .map(|d| {
            let x = d as f64 * h;
            let mut acc = 0.0;
            for m in 1..half {
                acc += (m as f64 * x).cos() / m as f64;
            }
            let nyq = if d % 2 == 0 { 1.0 } else { -1.0 };
            -4.0 * PI / nf * acc - 4.0 * PI / (nf * nf) * nyq
        })
        .collect();
    let w = Arc::new(w);
    weight_cache().lock().expect("weight cache poisoned").insert(n, w.clone());
    w
}

/// Arc-length derivative `∂ₜ = (1/σ') d/ds` as a dense matrix.
pub fn tangential_derivative(curve: &Curve) -> CMat {
    let d = differentiation_matrix(curve.n);
    let inv: Vec<f64> = curve.speed.iter().map(|s| 1.0 / s).collect();
    row_scale(&inv, &d)
}

struct PairValues {
    h0: c64,
    h1: c64,
    j0: c64,
    j1: c64,
}

fn pair_values(k: c64, r: f64, need_j: bool) -> Result<PairValues> {
    let z = k * r;
    let (h0, h1) = hankel1_01(z)?;
    let (j0, j1) = if k.im == 0.0 {
        (c64::new(h0.re, 0.0), c64::new(h1.re, 0.0))
    } else if need_j {
        besselj_01(z)?
    } else {
        (ZERO, ZERO)
    };
    Ok(PairValues { h0, h1, j0, j1 })
}

/// Largest `Im k·r` allowed inside the split window (`|J₀| ≲ e^{WINDOW_GROWTH}`).
const WINDOW_GROWTH: f64 = 6.0;
/// Minimum window width in grid spacings, so the taper stays resolved.
const WINDOW_MIN_POINTS: f64 = 8.0;
/// Window exponent `p` in `χ(τ) = exp(−(τ/σ)^{2p})`.
const WINDOW_POWER: i32 = 4;

/// Parameter window `χ(τ) = exp(−(τ/σ)^{2p})` of the log split. It is entire,
/// and `1 − χ = O(τ^{2p})` leaves a `τ^{2p} log τ` term in `M₂`, whose
/// quadrature error `O((h/σ)^{2p+1})` is far below the other errors.
#[derive(Debug, Clone, Copy)]
struct SplitWindow {
    sigma: f64,
}

impl SplitWindow {
    /// `None` means the global split (χ ≡ 1) is accurate.
    fn new(k: c64, curve: &Curve) -> Option<Self> {
        let diam = curve
            .x
            .iter()
            .flat_map(|p| curve.x.iter().map(move |q| (p[0] - q[0]).hypot(p[1] - q[1])))
            .fold(0.0, f64::max);
        if k.im * diam <= WINDOW_GROWTH {
            return None;
        }
        let smax = curve.speed.iter().fold(0.0, |m: f64, v| m.max(*v));
        let h = 2.0 * PI / curve.n as f64;
        // chord ≤ smax·|τ|
        let sigma = (WINDOW_GROWTH / (k.im * smax)).max(WINDOW_MIN_POINTS * h);
        // χ must vanish to rounding at |τ| = π to stay periodic
        if sigma > PI / 2.0 {
            return None;
        }
        Some(SplitWindow { sigma })
    }

    fn value(&self, tau: f64) -> f64 {
        (-(tau / self.sigma).powi(2 * WINDOW_POWER)).exp()
    }
}

/// Grid offset `(i − j)h` wrapped to `(−π, π]`.
fn wrapped_offset(i: usize, j: usize, n: usize) -> f64 {
    let d = (i + n - j) % n;
    let d = if 2 * d > n { d as f64 - n as f64 } else { d as f64 };
    d * 2.0 * PI / n as f64
}

/// Assemble V, K, Kᵀ and W at wavenumber `k` on `curve`.
pub fn assemble_all(k: c64, curve: &Curve) -> Result<BioSet> {
    let n = curve.n;
    if n < 16 {
        return Err(Error::Config(format!("grid too coarse for assembly: N = {n} < 16")));
    }
    if k.im < 0.0 || k.norm() == 0.0 {
        return Err(Error::Config(format!("wavenumber must be nonzero with Im k ≥ 0, got {k}")));
    }
    let rw = log_weights(n);
    let h = 2.0 * PI / n as f64;
    let x = &curve.x;
    let nx = &curve.normal;
    let sp = &curve.speed;
    let window = SplitWindow::new(k, curve);
    let chi = |i: usize, j: usize| window.map_or(1.0, |w| w.value(wrapped_offset(i, j, n)));

    // Bessel values are symmetric in (i, j): evaluate the strict upper triangle once.
    let upper: Vec<Vec<PairValues>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| {
                    let r = (x[i][0] - x[j][0]).hypot(x[i][1] - x[j][1]);
                    pair_values(k, r, chi(i, j) > 1e-300)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut v = CMat::zeros(n, n);
    let mut kd = CMat::zeros(n, n);
    let mut kt = CMat::zeros(n, n);
    let inv4pi = 1.0 / (4.0 * PI);
    for i in 0..n {
        for j in 0..n {
            let w_log = rw[(i + n - j) % n];
            if i == j {
                let m1 = -inv4pi * sp[j];
                let m2 = (I / 4.0 - (1.0 / (2.0 * PI)) * (EULER_GAMMA + (k * sp[j] / 2.0).ln())) * sp[j];
                v[(i, j)] = w_log * m1 + h * m2;
                let kdiag = c64::new(-curve.kappa[j] * sp[j] * inv4pi, 0.0);
                kd[(i, j)] = h * kdiag;
                kt[(i, j)] = h * kdiag;
                continue;
            }
            let pv = if i < j { &upper[i][j - i - 1] } else { &upper[j][i - j - 1] };
            let dx = [x[i][0] - x[j][0], x[i][1] - x[j][1]];
            let r = dx[0].hypot(dx[1]);
            let ds = (i as f64 - j as f64) * h;
            let lg = (4.0 * (ds / 2.0).sin().powi(2)).ln();
            let c = chi(i, j);
            // single layer
            let m1 = -inv4pi * c * pv.j0 * sp[j];
            let full = I / 4.0 * pv.h0 * sp[j];
            v[(i, j)] = w_log * m1 + h * (full - m1 * lg);
            // double layer, normal at the source
            let cy = (dx[0] * nx[j][0] + dx[1] * nx[j][1]) / r;
            let m1k = -k * inv4pi * c * pv.j1 * cy * sp[j];
            let fullk = I * k / 4.0 * pv.h1 * cy * sp[j];
            kd[(i, j)] = w_log * m1k + h * (fullk - m1k * lg);
            // adjoint double layer, normal at the target
            let cx = (dx[0] * nx[i][0] + dx[1] * nx[i][1]) / r;
            let m1t = k * inv4pi * c * pv.j1 * cx * sp[j];
            let fullt = -I * k / 4.0 * pv.h1 * cx * sp[j];
            kt[(i, j)] = w_log * m1t + h * (fullt - m1t * lg);
        }
    }
    let w = maue(k, &v, curve);
    Ok(BioSet { k, v, k_dl: kd, kt, w })
}

/// `W = ∂ₜ V ∂ₜ + k² Σ_c n_c V n_c`
pub fn maue(k: c64, v: &CMat, curve: &Curve) -> CMat {
    let dt = tangential_derivative(curve);
    let dvd = &(&dt * v) * &dt;
    let n1 = curve.normal_component(0);
    let n2 = curve.normal_component(1);
    let nvn = crate::linalg::add(&crate::linalg::sandwich(&n1, v, &n1), &crate::linalg::sandwich(&n2, v, &n2));
    crate::linalg::axpy(&dvd, k * k, &nvn)
}

/// Assemble one operator.
pub fn assemble_bio(kind: BioKind, k: c64, curve: &Curve) -> Result<DiscreteOperator> {
    let set = assemble_all(k, curve)?;
    Ok(set.operator(kind))
}

/// Layer potential kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    Single,
    Double,
}

fn check_points(curve: &Curve, points: &[[f64; 2]]) -> Result<()> {
    for p in points {
        for x in &curve.x {
            if (p[0] - x[0]).hypot(p[1] - x[1]) < 1e-12 {
                return Err(Error::Domain(format!("evaluation point {p:?} lies on the boundary")));
            }
        }
    }
    Ok(())
}

/// Layer potential values at off-boundary points (trapezoidal rule).
pub fn eval_potential(
    kind: PotentialKind,
    k: c64,
    curve: &Curve,
    density: &[c64],
    points: &[[f64; 2]],
) -> Result<Vec<c64>> {
    check_points(curve, points)?;
    let h = 2.0 * PI / curve.n as f64;
    points
        .par_iter()
        .map(|p| {
            let mut acc = ZERO;
            for j in 0..curve.n {
                if density[j] == ZERO {
                    continue;
                }
                let dx = [p[0] - curve.x[j][0], p[1] - curve.x[j][1]];
                let r = dx[0].hypot(dx[1]);
                let (h0, h1) = hankel1_01(k * r)?;
                let kern = match kind {
                    PotentialKind::Single => I / 4.0 * h0,
                    PotentialKind::Double => {
                        let c = (dx[0] * curve.normal[j][0] + dx[1] * curve.normal[j][1]) / r;
                        I * k / 4.0 * h1 * c
                    }
                };
                acc += kern * density[j] * curve.speed[j];
            }
            Ok(acc * h)
        })
        .collect()
}

/// Gradients of layer potentials at off-boundary points.
pub fn eval_potential_gradient(
    kind: PotentialKind,
    k: c64,
    curve: &Curve,
    density: &[c64],
    points: &[[f64; 2]],
) -> Result<Vec<[c64; 2]>> {
    check_points(curve, points)?;
    let h = 2.0 * PI / curve.n as f64;
    points
        .par_iter()
        .map(|p| {
            let mut acc = [ZERO; 2];
            for j in 0..curve.n {
                if density[j] == ZERO {
                    continue;
                }
                let dx = [p[0] - curve.x[j][0], p[1] - curve.x[j][1]];
                let r = dx[0].hypot(dx[1]);
                let (h0, h1) = hankel1_01(k * r)?;
                let wgt = density[j] * curve.speed[j];
                match kind {
                    PotentialKind::Single => {
                        let f = -I * k / 4.0 * h1 / r;
                        acc[0] += f * dx[0] * wgt;
                        acc[1] += f * dx[1] * wgt;
                    }
                    PotentialKind::Double => {
                        let ny = curve.normal[j];
                        let c = dx[0] * ny[0] + dx[1] * ny[1];
                        // g(r) = H1(kr)/r, g' = (k H0 − 2 H1/r)/r
                        let g = h1 / r;
                        let gp = (k * h0 - 2.0 * h1 / r) / r;
                        for a in 0..2 {
                            acc[a] += I * k / 4.0 * (gp * dx[a] / r * c + g * ny[a]) * wgt;
                        }
                    }
                }
            }
            Ok([acc[0] * h, acc[1] * h])
        })
        .collect()
}

/// Far-field pattern `u∞(x̂)` with `u(x) ≈ e^{ikr}/√r · u∞(x̂)`.
pub fn far_field(kind: PotentialKind, k: f64, curve: &Curve, density: &[c64], directions: &[[f64; 2]]) -> Vec<c64> {
    let h = 2.0 * PI / curve.n as f64;
    let pref = c64::from_polar(1.0, PI / 4.0) / (8.0 * PI * k).sqrt();
    directions
        .iter()
        .map(|d| {
            let mut acc = ZERO;
            for j in 0..curve.n {
                let y = curve.x[j];
                let ph = c64::from_polar(1.0, -k * (d[0] * y[0] + d[1] * y[1]));
                let f = match kind {
                    PotentialKind::Single => c64::new(1.0, 0.0),
                    PotentialKind::Double => {
                        let ny = curve.normal[j];
                        -I * k * (d[0] * ny[0] + d[1] * ny[1])
                    }
                };
                acc += f * ph * density[j] * curve.speed[j];
            }
            pref * acc * h
        })
        .collect()
}

/// `D V`, the tangential derivative of the single layer (used in blocks).
pub fn dv(curve: &Curve, v: &CMat) -> CMat {
    &tangential_derivative(curve) * v
}

/// `Σ_c a_c · Op(b_c ·)` for vector fields `a, b` given componentwise.
pub fn dot_sandwich(a: [&[f64]; 2], op: &CMat, b: [&[f64]; 2]) -> CMat {
    let s0 = crate::linalg::sandwich(a[0], op, b[0]);
    let s1 = crate::linalg::sandwich(a[1], op, b[1]);
    &s0 + &s1
}

/// `Op · diag(d)` shorthand used for the `(n·)` right factors.
pub fn right_scale(op: &CMat, d: &[f64]) -> CMat {
    col_scale(op, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_weights_integrate_constants() {
        // ∫ log(4 sin²(s/2)) ds = 0 over a period
        let w = log_weights(32);
        let s: f64 = w.iter().sum();
        assert!(s.abs() < 1e-13, "{s}");
    }

    #[test]
    fn rejects_coarse_grid() {
        let c = crate::geometry::discretize(crate::geometry::ShapeKind::Circle, &[], 8).unwrap();
        assert!(assemble_all(c64::new(1.0, 0.0), &c).is_err());
    }
}
