//! Scatterer boundaries: closed curves of length 2π and their discretisations.
//!
//! Conventions used throughout the crate: the curve is traversed
//! counterclockwise, `t` is the unit tangent, `n = Q t` with
//! `Q = [[0, 1], [-1, 0]]` is the outward normal (so `t = -Q n`), and the
//! curvature satisfies `∂_s t = -κ n`, `∂_s n = κ t`. With these conventions
//! the unit circle has `κ = +1`; every operator formula in [`crate::traces`]
//! and [`crate::formulations`] reads κ from this field.

use crate::error::{Error, Result};
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

const TWO_PI: f64 = 2.0 * PI;

/// The scatterer shapes of the experiment suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShapeKind {
    Circle,
    Kite,
    Cavity,
    Square,
    LShape,
}

impl ShapeKind {
    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Circle => "circle",
            ShapeKind::Kite => "kite",
            ShapeKind::Cavity => "cavity",
            ShapeKind::Square => "square",
            ShapeKind::LShape => "lshape",
        }
    }

    pub fn is_smooth(self) -> bool {
        matches!(self, ShapeKind::Circle | ShapeKind::Kite | ShapeKind::Cavity)
    }

    pub fn all() -> [ShapeKind; 5] {
        [ShapeKind::Circle, ShapeKind::Kite, ShapeKind::Cavity, ShapeKind::Square, ShapeKind::LShape]
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShapeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "circle" => Ok(ShapeKind::Circle),
            "kite" => Ok(ShapeKind::Kite),
            "cavity" => Ok(ShapeKind::Cavity),
            "square" => Ok(ShapeKind::Square),
            "lshape" | "l-shape" | "l_shape" => Ok(ShapeKind::LShape),
            other => Err(Error::Config(format!(
                "unknown shape '{other}' (expected circle, kite, cavity, square, lshape)"
            ))),
        }
    }
}

/// One coordinate as a trigonometric polynomial `Σ a_m cos(mt) + b_m sin(mt)`.
#[derive(Debug, Clone, PartialEq)]
struct TrigSeries {
    terms: Vec<(u32, f64, f64)>,
}

impl TrigSeries {
    fn new(terms: &[(u32, f64, f64)]) -> Self {
        TrigSeries { terms: terms.to_vec() }
    }

    /// r-th derivative at t.
    fn eval(&self, r: u32, t: f64) -> f64 {
        let mut acc = 0.0;
        for &(m, a, b) in &self.terms {
            let mf = m as f64;
            if m == 0 {
                if r == 0 {
                    acc += a;
                }
                continue;
            }
            let ph = mf * t + r as f64 * PI / 2.0;
            acc += mf.powi(r as i32) * (a * ph.cos() + b * ph.sin());
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Trig { x1: TrigSeries, x2: TrigSeries, scale: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
}

/// A closed, positively oriented curve `x(t)`, `t ∈ [0, 2π)`, of length 2π.
///
/// Smooth shapes are analytic trigonometric polynomials in a parameter that
/// is generally not arc length; polygons are parameterised by arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricCurve {
    pub kind: ShapeKind,
    pub analytic: bool,
    repr: Repr,
}

impl ParametricCurve {
    /// r-th derivative of the position map (r = 0 is the position).
    pub fn derivative(&self, r: u32, t: f64) -> [f64; 2] {
        match &self.repr {
            Repr::Trig { x1, x2, scale } => [scale * x1.eval(r, t), scale * x2.eval(r, t)],
            Repr::Polygon { vertices } => polygon_eval(vertices, r, t),
        }
    }

    pub fn position(&self, t: f64) -> [f64; 2] {
        self.derivative(0, t)
    }

    /// Scaling factor applied to the raw trigonometric formula (`1/L`).
    pub fn scale(&self) -> Option<f64> {
        match &self.repr {
            Repr::Trig { scale, .. } => Some(*scale),
            Repr::Polygon { .. } => None,
        }
    }

    pub fn vertices(&self) -> Option<&[[f64; 2]]> {
        match &self.repr {
            Repr::Polygon { vertices } => Some(vertices),
            Repr::Trig { .. } => None,
        }
    }

    fn speed(&self, t: f64) -> f64 {
        let d = self.derivative(1, t);
        d[0].hypot(d[1])
    }

    /// Signed curvature at parameter t (positive on convex arcs).
    pub fn curvature(&self, t: f64) -> f64 {
        let d1 = self.derivative(1, t);
        let d2 = self.derivative(2, t);
        let sp = d1[0].hypot(d1[1]);
        (d1[0] * d2[1] - d1[1] * d2[0]) / (sp * sp * sp)
    }

    /// `max |κ|` over the curve: dense sampling refined by golden-section
    /// search. Polygons use 1, the value of the circle with the same perimeter.
    pub fn curvature_bound(&self) -> f64 {
        if matches!(self.repr, Repr::Polygon { .. }) {
            return 1.0;
        }
        let m = 4096;
        let h = TWO_PI / m as f64;
        let f = |t: f64| self.curvature(t).abs();
        let j = (0..m).max_by(|&a, &b| f(a as f64 * h).total_cmp(&f(b as f64 * h))).unwrap_or(0);
        let (mut a, mut b) = ((j as f64 - 1.0) * h, (j as f64 + 1.0) * h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let (c, d) = (b - g * (b - a), a + g * (b - a));
            if f(c) > f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        f(0.5 * (a + b)).max(f(j as f64 * h))
    }

    /// Length by the trapezoidal rule with `m` samples (spectrally accurate
    /// for smooth periodic curves).
    pub fn length_with(&self, m: usize) -> f64 {
        match &self.repr {
            Repr::Polygon { vertices } => polygon_perimeter(vertices),
            Repr::Trig { .. } => {
                let h = TWO_PI / m as f64;
                (0..m).map(|j| self.speed(j as f64 * h)).sum::<f64>() * h
            }
        }
    }

    pub fn length(&self) -> f64 {
        self.length_with(4096)
    }

    /// Signed enclosed area (positive for counterclockwise orientation).
    pub fn signed_area(&self) -> f64 {
        let m = 4096;
        let h = TWO_PI / m as f64;
        match &self.repr {
            Repr::Polygon { vertices } => {
                let k = vertices.len();
                (0..k)
                    .map(|i| {
                        let a = vertices[i];
                        let b = vertices[(i + 1) % k];
                        a[0] * b[1] - a[1] * b[0]
                    })
                    .sum::<f64>()
                    / 2.0
            }
            Repr::Trig { .. } => {
                (0..m)
                    .map(|j| {
                        let t = j as f64 * h;
                        let x = self.position(t);
                        let d = self.derivative(1, t);
                        x[0] * d[1] - x[1] * d[0]
                    })
                    .sum::<f64>()
                    * h
                    / 2.0
            }
        }
    }

    /// Whether `p` lies inside the curve (winding number test on a fine polygon).
    pub fn contains(&self, p: [f64; 2]) -> bool {
        let m = 2048;
        let pts: Vec<[f64; 2]> = match &self.repr {
            Repr::Polygon { vertices } => vertices.clone(),
            Repr::Trig { .. } => (0..m).map(|j| self.position(TWO_PI * j as f64 / m as f64)).collect(),
        };
        let mut inside = false;
        let k = pts.len();
        for i in 0..k {
            let a = pts[i];
            let b = pts[(i + 1) % k];
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let xc = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                if p[0] < xc {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Distance from `p` to the curve, sampled at `m` points.
    pub fn distance(&self, p: [f64; 2]) -> f64 {
        let m = 4096;
        (0..m)
            .map(|j| {
                let x = self.position(TWO_PI * j as f64 / m as f64);
                (x[0] - p[0]).hypot(x[1] - p[1])
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Centroid of the enclosed region.
    pub fn centroid(&self) -> [f64; 2] {
        let m = 4096;
        let h = TWO_PI / m as f64;
        let a = self.signed_area();
        let (mut cx, mut cy) = (0.0, 0.0);
        for j in 0..m {
            let t = j as f64 * h;
            let x = self.position(t);
            let d = match &self.repr {
                Repr::Polygon { .. } => self.derivative(1, t),
                Repr::Trig { .. } => self.derivative(1, t),
            };
            // Green: cx = (1/2A)∮ x² dy, cy = -(1/2A)∮ y² dx
            cx += x[0] * x[0] * d[1];
            cy -= x[1] * x[1] * d[0];
        }
        [cx * h / (2.0 * a), cy * h / (2.0 * a)]
    }
}

fn polygon_perimeter(v: &[[f64; 2]]) -> f64 {
    let k = v.len();
    (0..k)
        .map(|i| {
            let a = v[i];
            let b = v[(i + 1) % k];
            (b[0] - a[0]).hypot(b[1] - a[1])
        })
        .sum()
}

fn polygon_eval(v: &[[f64; 2]], r: u32, t: f64) -> [f64; 2] {
    let k = v.len();
    let mut s = t.rem_euclid(TWO_PI);
    for i in 0..k {
        let a = v[i];
        let b = v[(i + 1) % k];
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        if s <= len || i == k - 1 {
            let e = [(b[0] - a[0]) / len, (b[1] - a[1]) / len];
            return match r {
                0 => [a[0] + s * e[0], a[1] + s * e[1]],
                1 => e,
                _ => [0.0, 0.0],
            };
        }
        s -= len;
    }
    unreachable!("polygon has at least one edge")
}

/// Build one of the named shapes, scaled to total length 2π.
///
/// Optional parameters: circle `[cx, cy]` (centre), kite `[a, b]` replacing
/// the constants 0.65 and 1.5. The other shapes take no parameters.
pub fn make_shape(kind: ShapeKind, params: &[f64]) -> Result<ParametricCurve> {
    let bad = |n: usize| {
        Error::Config(format!("shape {kind} accepts at most {n} parameters, got {}", params.len()))
    };
    let trig = |x1: TrigSeries, x2: TrigSeries| -> ParametricCurve {
        let raw = ParametricCurve { kind, analytic: true, repr: Repr::Trig { x1, x2, scale: 1.0 } };
        let len = raw.length_with(8192);
        let Repr::Trig { x1, x2, .. } = raw.repr else { unreachable!() };
        ParametricCurve { kind, analytic: true, repr: Repr::Trig { x1, x2, scale: TWO_PI / len } }
    };
    match kind {
        ShapeKind::Circle => {
            if params.len() > 2 {
                return Err(bad(2));
            }
            let cx = params.first().copied().unwrap_or(0.0);
            let cy = params.get(1).copied().unwrap_or(0.0);
            Ok(ParametricCurve {
                kind,
                analytic: true,
                repr: Repr::Trig {
                    x1: TrigSeries::new(&[(0, cx, 0.0), (1, 1.0, 0.0)]),
                    x2: TrigSeries::new(&[(0, cy, 0.0), (1, 0.0, 1.0)]),
                    scale: 1.0,
                },
            })
        }
        ShapeKind::Kite => {
            if params.len() > 2 {
                return Err(bad(2));
            }
            let a = params.first().copied().unwrap_or(0.65);
            let b = params.get(1).copied().unwrap_or(1.5);
            Ok(trig(
                TrigSeries::new(&[(0, -a, 0.0), (1, 1.0, 0.0), (2, a, 0.0)]),
                TrigSeries::new(&[(1, 0.0, b)]),
            ))
        }
        ShapeKind::Cavity => {
            if !params.is_empty() {
                return Err(bad(0));
            }
            Ok(trig(
                TrigSeries::new(&[(1, 12.0, 0.0), (2, 24.0, 0.0)]),
                TrigSeries::new(&[(1, 0.0, 28.0), (2, 0.0, 17.0), (3, 0.0, 18.0), (4, 0.0, -2.0)]),
            ))
        }
        ShapeKind::Square => {
            if !params.is_empty() {
                return Err(bad(0));
            }
            let a = PI / 4.0;
            Ok(ParametricCurve {
                kind,
                analytic: false,
                repr: Repr::Polygon { vertices: vec![[-a, -a], [a, -a], [a, a], [-a, a]] },
            })
        }
        ShapeKind::LShape => {
            if !params.is_empty() {
                return Err(bad(0));
            }
            let a = PI / 4.0;
            Ok(ParametricCurve {
                kind,
                analytic: false,
                repr: Repr::Polygon {
                    vertices: vec![[-a, -a], [a, -a], [a, 0.0], [0.0, 0.0], [0.0, a], [-a, a]],
                },
            })
        }
    }
}

/// Corner data of a graded polygon mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedMesh {
    /// Parameter values of the corners in `[−h/2, 2π)`.
    pub corners: Vec<f64>,
    /// Grading exponent.
    pub p: u32,
    /// Arc-length positions of the nodes, `w(s_j)`.
    pub warped: Vec<f64>,
    /// Side lengths, in traversal order starting at the first vertex.
    pub sides: Vec<f64>,
}

impl GradedMesh {
    fn side_param_len(&self) -> f64 {
        TWO_PI / self.sides.len() as f64
    }

    /// Warp `σ = w(s)` and its derivative.
    pub fn warp(&self, s: f64) -> (f64, f64) {
        let ns = self.sides.len();
        let c0 = self.corners[0];
        let pl = self.side_param_len();
        let rel = (s - c0).rem_euclid(TWO_PI);
        let i = ((rel / pl).floor() as usize).min(ns - 1);
        let u = (rel - i as f64 * pl) / pl;
        let (w, dw) = sigmoid(self.p, u);
        let start: f64 = self.sides[..i].iter().sum();
        (start + self.sides[i] * w, self.sides[i] * dw / pl)
    }
}

/// Polynomial sigmoid on `[0, 1]`: a cubic inner map followed by
/// `v^p / (v^p + (1 − v)^p)`. Returns the value and its derivative.
pub fn sigmoid(p: u32, u: f64) -> (f64, f64) {
    let pf = p as f64;
    let c = 1.0 / pf - 0.5;
    let v = c * (1.0 - 2.0 * u).powi(3) + (2.0 * u - 1.0) / pf + 0.5;
    let dv = -6.0 * c * (1.0 - 2.0 * u).powi(2) + 2.0 / pf;
    let a = v.powi(p as i32);
    let b = (1.0 - v).powi(p as i32);
    let den = a + b;
    let w = a / den;
    let dw = pf * (v * (1.0 - v)).powi(p as i32 - 1) / (den * den) * dv;
    (w, dw)
}

/// An `N`-point discretisation of a closed curve at nodes `s_j = 2πj/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub kind: ShapeKind,
    pub n: usize,
    pub s: Vec<f64>,
    pub x: Vec<[f64; 2]>,
    /// Unit tangents.
    pub t: Vec<[f64; 2]>,
    /// Outward unit normals, `n = Q t`.
    pub normal: Vec<[f64; 2]>,
    /// Signed curvature (`+1` on the unit circle).
    pub kappa: Vec<f64>,
    /// `|dx/ds|`: 1 on arc-length grids, the warp derivative on graded grids.
    pub speed: Vec<f64>,
    pub graded: Option<GradedMesh>,
    /// `max_Γ |κ|` of the underlying curve, not of the samples.
    pub kappa_bound: f64,
}

/// Rotation `Q = [[0, 1], [−1, 0]]`.
pub fn rotate_q(v: [f64; 2]) -> [f64; 2] {
    [v[1], -v[0]]
}

impl Curve {
    pub fn h(&self) -> f64 {
        TWO_PI / self.n as f64
    }

    pub fn is_graded(&self) -> bool {
        self.graded.is_some()
    }

    /// Curvature bound used by the complexified-wavenumber rule (see
    /// [`ParametricCurve::curvature_bound`]); independent of `N`.
    pub fn curvature_bound(&self) -> f64 {
        self.kappa_bound
    }

    pub fn tangent_component(&self, c: usize) -> Vec<f64> {
        self.t.iter().map(|v| v[c]).collect()
    }

    pub fn normal_component(&self, c: usize) -> Vec<f64> {
        self.normal.iter().map(|v| v[c]).collect()
    }

    /// Total length by the node quadrature `Σ h |x'(s_j)|`.
    pub fn length(&self) -> f64 {
        self.speed.iter().sum::<f64>() * self.h()
    }

    /// The same nodes traversed clockwise: normals and curvature flip sign.
    pub fn reversed_orientation(&self) -> Curve {
        let mut c = self.clone();
        for v in c.t.iter_mut() {
            *v = [-v[0], -v[1]];
        }
        for v in c.normal.iter_mut() {
            *v = [-v[0], -v[1]];
        }
        for k in c.kappa.iter_mut() {
            *k = -*k;
        }
        c
    }
}

/// Fourier coefficients of `|x'(t)|` sampled at `m` points, normalised so
/// that `c[0]` is the mean.
fn speed_coefficients(curve: &ParametricCurve, m: usize) -> Vec<num_complex::Complex64> {
    let mut buf: Vec<num_complex::Complex64> = (0..m)
        .map(|j| num_complex::Complex64::new(curve.speed(TWO_PI * j as f64 / m as f64), 0.0))
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    for v in buf.iter_mut() {
        *v /= m as f64;
    }
    buf
}

/// Cumulative length `ℓ(t) = ∫_0^t |x'|` from speed coefficients.
fn cumulative_length(c: &[num_complex::Complex64], t: f64) -> f64 {
    let m = c.len();
    let mut acc = c[0].re * t;
    for k in 1..m / 2 {
        let kf = k as f64;
        // 2 Re(c_k (e^{ikt} − 1)/(ik))
        let e = num_complex::Complex64::new((kf * t).cos() - 1.0, (kf * t).sin());
        let term = c[k] * e / num_complex::Complex64::new(0.0, kf);
        acc += 2.0 * term.re;
    }
    acc
}

/// Discretise a smooth curve at `N` equispaced arc-length nodes.
pub fn reparametrize_arclength(curve: &ParametricCurve, n: usize) -> Result<Curve> {
    if n < 8 || n % 2 == 1 {
        return Err(Error::Config(format!("N must be even and ≥ 8, got {n}")));
    }
    if !curve.analytic {
        return Err(Error::Config(format!(
            "{} is not smooth; use graded_nodes for polygons",
            curve.kind
        )));
    }
    // Resolve the speed until its Fourier tail is negligible.
    let mut m = 256;
    let coeffs = loop {
        let c = speed_coefficients(curve, m);
        let tail = c[m / 4..m / 2].iter().map(|v| v.norm()).fold(0.0, f64::max);
        if tail < 1e-16 * c[0].re || m >= 1 << 16 {
            break c;
        }
        m *= 2;
    };
    let total = coeffs[0].re * TWO_PI;
    let mut s = Vec::with_capacity(n);
    let mut x = Vec::with_capacity(n);
    let mut t = Vec::with_capacity(n);
    let mut normal = Vec::with_capacity(n);
    let mut kappa = Vec::with_capacity(n);
    let mut tau = 0.0_f64;
    for j in 0..n {
        let sj = TWO_PI * j as f64 / n as f64;
        let target = sj / TWO_PI * total;
        // Safeguarded Newton on ℓ(τ) = target, τ ∈ [lo, hi].
        let (mut lo, mut hi) = (tau, TWO_PI);
        if j == 0 {
            tau = 0.0;
        }
        let mut converged = j == 0;
        for _ in 0..100 {
            if converged {
                break;
            }
            let f = cumulative_length(&coeffs, tau) - target;
            if f.abs() <= 1e-14 * total {
                converged = true;
                break;
            }
            if f > 0.0 {
                hi = hi.min(tau);
            } else {
                lo = lo.max(tau);
            }
            let mut next = tau - f / curve.speed(tau);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            tau = next;
        }
        if !converged {
            let f = cumulative_length(&coeffs, tau) - target;
            return Err(Error::Numerical(format!(
                "arc-length inversion failed at node {j}: residual {f:e}, bracket [{lo}, {hi}]"
            )));
        }
        let d1 = curve.derivative(1, tau);
        let sp = d1[0].hypot(d1[1]);
        let tj = [d1[0] / sp, d1[1] / sp];
        s.push(sj);
        x.push(curve.position(tau));
        t.push(tj);
        normal.push(rotate_q(tj));
        kappa.push(curve.curvature(tau));
    }
    let kappa_bound = curve.curvature_bound();
    Ok(Curve { kind: curve.kind, n, s, x, t, normal, kappa, speed: vec![1.0; n], graded: None, kappa_bound })
}

/// Discretise a smooth curve at `N` equispaced nodes of its own parameter
/// (not arc length). The trigonometric shapes are entire in `t`, whereas
/// their arc-length reparametrisations can have branch points close to the
/// real axis; this grid isolates that effect in accuracy studies.
pub fn native_nodes(curve: &ParametricCurve, n: usize) -> Result<Curve> {
    if n < 8 || n % 2 == 1 {
        return Err(Error::Config(format!("N must be even and ≥ 8, got {n}")));
    }
    if !curve.analytic {
        return Err(Error::Config(format!("{} is not smooth", curve.kind)));
    }
    let s: Vec<f64> = (0..n).map(|j| TWO_PI * j as f64 / n as f64).collect();
    let mut x = Vec::with_capacity(n);
    let mut t = Vec::with_capacity(n);
    let mut normal = Vec::with_capacity(n);
    let mut kappa = Vec::with_capacity(n);
    let mut speed = Vec::with_capacity(n);
    for &sj in &s {
        let d1 = curve.derivative(1, sj);
        let sp = d1[0].hypot(d1[1]);
        let tj = [d1[0] / sp, d1[1] / sp];
        x.push(curve.position(sj));
        t.push(tj);
        normal.push(rotate_q(tj));
        kappa.push(curve.curvature(sj));
        speed.push(sp);
    }
    let kappa_bound = curve.curvature_bound();
    Ok(Curve { kind: curve.kind, n, s, x, t, normal, kappa, speed, graded: None, kappa_bound })
}

/// Discretise a polygon with `N` nodes graded polynomially towards every
/// corner. Nodes never coincide with corners: corner parameters sit half a
/// grid step before the first node of each side.
pub fn graded_nodes(kind: ShapeKind, p: u32, n: usize) -> Result<Curve> {
    let poly = make_shape(kind, &[])?;
    let Some(vertices) = poly.vertices() else {
        return Err(Error::Config(format!("{kind} is smooth; use reparametrize_arclength")));
    };
    if p < 2 {
        return Err(Error::Config(format!("grading exponent must be ≥ 2, got {p}")));
    }
    let ns = vertices.len();
    if n % ns != 0 || n % 2 == 1 || n < 2 * ns {
        return Err(Error::Config(format!(
            "N = {n} must be an even multiple of the side count {ns}"
        )));
    }
    let h = TWO_PI / n as f64;
    let sides: Vec<f64> = (0..ns)
        .map(|i| {
            let a = vertices[i];
            let b = vertices[(i + 1) % ns];
            (b[0] - a[0]).hypot(b[1] - a[1])
        })
        .collect();
    let corners: Vec<f64> = (0..ns).map(|i| TWO_PI * i as f64 / ns as f64 - h / 2.0).collect();
    let mut mesh = GradedMesh { corners, p, warped: Vec::with_capacity(n), sides };
    let mut x = Vec::with_capacity(n);
    let mut t = Vec::with_capacity(n);
    let mut normal = Vec::with_capacity(n);
    let mut speed = Vec::with_capacity(n);
    let s: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();
    for &sj in &s {
        let (sigma, dsigma) = mesh.warp(sj);
        let pos = polygon_eval(vertices, 0, sigma);
        // Tangent of the side containing the node (nodes are interior to sides).
        let e = polygon_eval(vertices, 1, sigma);
        mesh.warped.push(sigma);
        x.push(pos);
        t.push(e);
        normal.push(rotate_q(e));
        speed.push(dsigma);
    }
    Ok(Curve { kind, n, s, x, t, normal, kappa: vec![0.0; n], speed, graded: Some(mesh), kappa_bound: 1.0 })
}

/// Discretise any shape: arc length for smooth shapes, graded (p = 3) for polygons.
pub fn discretize(kind: ShapeKind, params: &[f64], n: usize) -> Result<Curve> {
    if kind.is_smooth() {
        reparametrize_arclength(&make_shape(kind, params)?, n)
    } else {
        graded_nodes(kind, 3, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        assert_eq!("Kite".parse::<ShapeKind>().unwrap(), ShapeKind::Kite);
        assert!("blob".parse::<ShapeKind>().is_err());
    }

    #[test]
    fn sigmoid_endpoints() {
        for p in 2..6 {
            let (w0, d0) = sigmoid(p, 0.0);
            let (w1, d1) = sigmoid(p, 1.0);
            assert!(w0.abs() < 1e-15 && (w1 - 1.0).abs() < 1e-15);
            assert!(d0.abs() < 1e-15 && d1.abs() < 1e-15);
            assert!((sigmoid(p, 0.5).0 - 0.5).abs() < 1e-15);
        }
    }
}
