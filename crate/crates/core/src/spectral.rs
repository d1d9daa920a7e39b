//! Periodic spectral machinery: grid functions, Fourier multipliers and the
//! residual-order estimator used to certify operator expansions.
//!
//! Fourier coefficients are `φ̂(n) = (1/N) Σ_j φ(s_j) e^{−i n s_j}` for
//! `n ∈ {−N/2, …, N/2−1}`. The Nyquist mode `N/2` is shared by `±N/2`; a
//! multiplier acts on it with the average `½(A(N/2) + A(−N/2))`.

use crate::error::{Error, Result};
use crate::linalg::{c64, CMat, ONE, ZERO};
use crate::medium::ElasticMedium;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Signed mode number of FFT slot `k` on an `n`-point grid.
pub fn mode_index(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

fn fft_forward(v: &mut [c64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(v.len()).process(v);
}

fn fft_inverse(v: &mut [c64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(v.len()).process(v);
}

/// Complex samples at the nodes `s_j = 2πj/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub values: Vec<c64>,
}

impl GridFunction {
    pub fn new(values: Vec<c64>) -> Self {
        GridFunction { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        GridFunction { values: values.iter().map(|&v| c64::new(v, 0.0)).collect() }
    }

    /// The exponential `e_n(s) = e^{ins}` sampled on `N` nodes.
    pub fn mode(n: i64, len: usize) -> Self {
        let h = 2.0 * PI / len as f64;
        GridFunction {
            values: (0..len).map(|j| c64::from_polar(1.0, n as f64 * j as f64 * h)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Coefficients in FFT order (slot `k` holds mode [`mode_index`]`(k, N)`).
    pub fn coefficients(&self) -> Vec<c64> {
        let mut c = self.values.clone();
        fft_forward(&mut c);
        let inv = 1.0 / c.len() as f64;
        c.iter_mut().for_each(|v| *v *= inv);
        c
    }

    pub fn from_coefficients(coeffs: &[c64]) -> Self {
        let mut v = coeffs.to_vec();
        fft_inverse(&mut v);
        GridFunction { values: v }
    }
}

type ScalarSymbol = Arc<dyn Fn(i64) -> c64 + Send + Sync>;
type MatrixSymbol = Arc<dyn Fn(i64) -> [[c64; 2]; 2] + Send + Sync>;

/// A scalar Fourier multiplier `e_n ↦ A(n) e_n`.
#[derive(Clone)]
pub struct ScalarMultiplier {
    pub name: String,
    /// Declared order `m`: `|A(n)| = O(|n|^m)`.
    pub order: f64,
    symbol: ScalarSymbol,
}

impl fmt::Debug for ScalarMultiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarMultiplier({}, order {})", self.name, self.order)
    }
}

impl ScalarMultiplier {
    pub fn new(name: impl Into<String>, order: f64, symbol: impl Fn(i64) -> c64 + Send + Sync + 'static) -> Self {
        ScalarMultiplier { name: name.into(), order, symbol: Arc::new(symbol) }
    }

    pub fn symbol(&self, n: i64) -> c64 {
        (self.symbol)(n)
    }

    /// Symbol seen by FFT slot `k` of an `len`-point grid.
    pub fn grid_symbol(&self, k: usize, len: usize) -> c64 {
        if len % 2 == 0 && k == len / 2 {
            let m = (len / 2) as i64;
            0.5 * (self.symbol(m) + self.symbol(-m))
        } else {
            self.symbol(mode_index(k, len))
        }
    }

    pub fn apply(&self, phi: &GridFunction) -> GridFunction {
        GridFunction::new(self.apply_slice(&phi.values))
    }

    pub fn apply_slice(&self, phi: &[c64]) -> Vec<c64> {
        let len = phi.len();
        let mut c = phi.to_vec();
        fft_forward(&mut c);
        let inv = 1.0 / len as f64;
        for (k, v) in c.iter_mut().enumerate() {
            *v *= self.grid_symbol(k, len) * inv;
        }
        fft_inverse(&mut c);
        c
    }

    /// Dense circulant matrix of the multiplier on an `len`-point grid.
    pub fn to_matrix(&self, len: usize) -> CMat {
        let mut c: Vec<c64> = (0..len).map(|k| self.grid_symbol(k, len)).collect();
        fft_inverse(&mut c);
        let inv = 1.0 / len as f64;
        CMat::from_fn(len, len, |i, j| c[(i + len - j) % len] * inv)
    }

    /// Symbol product (composition).
    pub fn then(&self, other: &ScalarMultiplier) -> ScalarMultiplier {
        let (a, b) = (self.symbol.clone(), other.symbol.clone());
        ScalarMultiplier::new(
            format!("{}·{}", other.name, self.name),
            self.order + other.order,
            move |n| a(n) * b(n),
        )
    }

    pub fn scaled(&self, s: c64) -> ScalarMultiplier {
        let a = self.symbol.clone();
        ScalarMultiplier::new(format!("{s}·{}", self.name), self.order, move |n| s * a(n))
    }

    pub fn plus(&self, other: &ScalarMultiplier) -> ScalarMultiplier {
        let (a, b) = (self.symbol.clone(), other.symbol.clone());
        ScalarMultiplier::new(
            format!("{}+{}", self.name, other.name),
            self.order.max(other.order),
            move |n| a(n) + b(n),
        )
    }
}

/// A 2×2 matrix Fourier multiplier acting on density pairs.
#[derive(Clone)]
pub struct MatrixMultiplier {
    pub name: String,
    pub order: f64,
    symbol: MatrixSymbol,
}

impl fmt::Debug for MatrixMultiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixMultiplier({}, order {})", self.name, self.order)
    }
}

impl MatrixMultiplier {
    pub fn new(
        name: impl Into<String>,
        order: f64,
        symbol: impl Fn(i64) -> [[c64; 2]; 2] + Send + Sync + 'static,
    ) -> Self {
        MatrixMultiplier { name: name.into(), order, symbol: Arc::new(symbol) }
    }

    pub fn symbol(&self, n: i64) -> [[c64; 2]; 2] {
        (self.symbol)(n)
    }

    pub fn grid_symbol(&self, k: usize, len: usize) -> [[c64; 2]; 2] {
        if len % 2 == 0 && k == len / 2 {
            let m = (len / 2) as i64;
            let (a, b) = (self.symbol(m), self.symbol(-m));
            let mut out = [[ZERO; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] = 0.5 * (a[i][j] + b[i][j]);
                }
            }
            out
        } else {
            self.symbol(mode_index(k, len))
        }
    }

    /// Apply to a stacked pair `[φ_p; φ_s]` of length `2N`.
    pub fn apply_stacked(&self, phi: &[c64]) -> Vec<c64> {
        let len = phi.len() / 2;
        let mut a = phi[..len].to_vec();
        let mut b = phi[len..].to_vec();
        fft_forward(&mut a);
        fft_forward(&mut b);
        let inv = 1.0 / len as f64;
        let mut ra = vec![ZERO; len];
        let mut rb = vec![ZERO; len];
        for k in 0..len {
            let m = self.grid_symbol(k, len);
            ra[k] = (m[0][0] * a[k] + m[0][1] * b[k]) * inv;
            rb[k] = (m[1][0] * a[k] + m[1][1] * b[k]) * inv;
        }
        fft_inverse(&mut ra);
        fft_inverse(&mut rb);
        ra.extend(rb);
        ra
    }

    /// Dense `2N×2N` matrix of the multiplier.
    pub fn to_matrix(&self, len: usize) -> CMat {
        let mut blocks: Vec<Vec<c64>> = vec![Vec::with_capacity(len); 4];
        for k in 0..len {
            let m = self.grid_symbol(k, len);
            blocks[0].push(m[0][0]);
            blocks[1].push(m[0][1]);
            blocks[2].push(m[1][0]);
            blocks[3].push(m[1][1]);
        }
        let inv = 1.0 / len as f64;
        for b in blocks.iter_mut() {
            fft_inverse(b);
        }
        CMat::from_fn(2 * len, 2 * len, |i, j| {
            let (bi, ii) = (i / len, i % len);
            let (bj, jj) = (j / len, j % len);
            blocks[2 * bi + bj][(ii + len - jj) % len] * inv
        })
    }

    /// Symbol product `other(n) · self(n)` (apply `self` first).
    pub fn then(&self, other: &MatrixMultiplier) -> MatrixMultiplier {
        let (a, b) = (self.symbol.clone(), other.symbol.clone());
        MatrixMultiplier::new(
            format!("{}·{}", other.name, self.name),
            self.order + other.order,
            move |n| mat2_mul(&b(n), &a(n)),
        )
    }
}

pub fn mat2_mul(a: &[[c64; 2]; 2], b: &[[c64; 2]; 2]) -> [[c64; 2]; 2] {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_det(a: &[[c64; 2]; 2]) -> c64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn mat2_inv(a: &[[c64; 2]; 2]) -> Option<[[c64; 2]; 2]> {
    let d = mat2_det(a);
    if d.norm() == 0.0 || !d.is_finite() {
        return None;
    }
    Some([[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]])
}

pub fn mat2_eigenvalues(a: &[[c64; 2]; 2]) -> [c64; 2] {
    let tr = a[0][0] + a[1][1];
    let disc = (tr * tr - 4.0 * mat2_det(a)).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
}

/// `(z)^{1/2}` on the branch used for every square-root symbol: the
/// principal root, except that negative reals map to the `+i` side.
pub fn sqrt_branch(z: c64) -> c64 {
    if z.im == 0.0 && z.re < 0.0 {
        c64::new(0.0, (-z.re).sqrt())
    } else {
        z.sqrt()
    }
}

/// `s̃(n) = (n² − k²)^{1/2}`
pub fn sqrt_symbol(n: i64, k: c64) -> c64 {
    let nf = n as f64;
    sqrt_branch(c64::new(nf * nf, 0.0) - k * k)
}

fn sign(n: i64) -> f64 {
    if n > 0 {
        1.0
    } else if n < 0 {
        -1.0
    } else {
        0.0
    }
}

/// Hilbert symbol `i·sign(n)`, with `H(0) = i`.
pub fn hilbert_symbol(n: i64) -> c64 {
    if n == 0 {
        c64::new(0.0, 1.0)
    } else {
        c64::new(0.0, sign(n))
    }
}

/// `(in)^r` for `n ≠ 0`, 0 at `n = 0`.
pub fn dr_symbol(r: i32, n: i64) -> c64 {
    if n == 0 {
        ZERO
    } else {
        c64::new(0.0, n as f64).powi(r)
    }
}

/// The basic multipliers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasicKind {
    /// `D_r`, symbol `(in)^r`.
    D(i32),
    /// Hilbert transform.
    H,
    /// `H D_r`, symbol `i·sign(n)(in)^r`.
    HD(i32),
    /// `Λ`, symbol `1/|n|` with `Λ(0) = 1`.
    Lambda,
    /// Mean value.
    J,
    /// `−½(n² − k̃²)^{1/2}`, the symbol approximating `W_{k̃}`.
    PsW(c64),
}

pub fn make_basic(kind: BasicKind) -> ScalarMultiplier {
    match kind {
        BasicKind::D(r) => ScalarMultiplier::new(format!("D{r}"), r as f64, move |n| dr_symbol(r, n)),
        BasicKind::H => ScalarMultiplier::new("H", 0.0, hilbert_symbol),
        BasicKind::HD(r) => ScalarMultiplier::new(format!("HD{r}"), r as f64, move |n| {
            if n == 0 {
                ZERO
            } else {
                c64::new(0.0, sign(n)) * dr_symbol(r, n)
            }
        }),
        BasicKind::Lambda => ScalarMultiplier::new("Lambda", -1.0, |n| {
            if n == 0 {
                ONE
            } else {
                c64::new(1.0 / (n as f64).abs(), 0.0)
            }
        }),
        BasicKind::J => ScalarMultiplier::new("J", f64::NEG_INFINITY, |n| if n == 0 { ONE } else { ZERO }),
        BasicKind::PsW(k) => ScalarMultiplier::new(format!("PS_W({k})"), 1.0, move |n| -0.5 * sqrt_symbol(n, k)),
    }
}

/// `𝓗₀ = [[I, −H], [−H, −I]]`, nilpotent of index 2 on modes `n ≠ 0`.
pub fn nilpotent_h0() -> MatrixMultiplier {
    MatrixMultiplier::new("H0", 0.0, |n| {
        let h = if n == 0 { ZERO } else { hilbert_symbol(n) };
        let one = if n == 0 { ZERO } else { ONE };
        [[one, -h], [-h, -one]]
    })
}

/// The regularizer families built from Fourier multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularizerKind {
    RD,
    RD1,
    RN,
    RN1,
}

/// Build a regularizer symbol and check it is non-singular on the band
/// `|n| ≤ band/2`.
pub fn make_regularizer(kind: RegularizerKind, m: &ElasticMedium, band: usize) -> Result<MatrixMultiplier> {
    let (kpt, kst) = (m.kp_tilde, m.ks_tilde);
    let i = c64::new(0.0, 1.0);
    let mm = match kind {
        RegularizerKind::RD => MatrixMultiplier::new("RD", -1.0, move |n| {
            if n == 0 {
                return [[ONE, ZERO], [ZERO, ONE]];
            }
            let (sp, ss) = (sqrt_symbol(n, kpt), sqrt_symbol(n, kst));
            let nf = n as f64;
            let delta = 1.0 / (nf * nf - sp * ss);
            [[delta * ss, -delta * i * nf], [-delta * i * nf, -delta * sp]]
        }),
        RegularizerKind::RD1 => {
            let at = m.alpha_tilde();
            MatrixMultiplier::new("RD1", 1.0, move |n| {
                let (sp, ss) = (sqrt_symbol(n, kpt), sqrt_symbol(n, kst));
                let nf = n as f64;
                let c = 2.0 / at;
                [[c * ss, -c * i * nf], [-c * i * nf, -c * sp]]
            })
        }
        RegularizerKind::RN => {
            let (mu, ks) = (m.mu, m.ks);
            MatrixMultiplier::new("RN", 0.0, move |n| {
                let (sp, ss) = (sqrt_symbol(n, kpt), sqrt_symbol(n, kst));
                let nf = n as f64;
                let a = c64::new(nf * nf - 0.5 * ks * ks, 0.0);
                let f = [[2.0 * mu * a, -2.0 * mu * i * nf * ss], [-2.0 * mu * i * nf * sp, -2.0 * mu * a]];
                mat2_inv(&f).unwrap_or([[c64::new(f64::NAN, 0.0); 2]; 2])
            })
        }
        RegularizerKind::RN1 => MatrixMultiplier::new("RN1", 0.0, move |n| {
            if n == 0 {
                return [[ONE, ZERO], [ZERO, -ONE]];
            }
            let (sp, ss) = (sqrt_symbol(n, kpt), sqrt_symbol(n, kst));
            let nf = n as f64;
            [[ONE, -i * nf / ss], [-i * nf / sp, -ONE]]
        }),
    };
    let half = (band / 2) as i64;
    for n in -half..=half {
        let s = mm.symbol(n);
        let ok = s.iter().flatten().all(|v| v.is_finite());
        let det = mat2_det(&s);
        if !ok || det.norm() < 1e-300 {
            return Err(Error::SingularSymbol { mode: n });
        }
    }
    Ok(mm)
}

/// Mode action `M_B(n)`: the `(a, b)` entry is `⟨e_n, B_ab e_n⟩ / N` for a
/// `2N×2N` block operator.
pub fn mode_action(op: &CMat, n: i64) -> [[c64; 2]; 2] {
    let len = op.nrows() / 2;
    let e = GridFunction::mode(n, len).values;
    let mut out = [[ZERO; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = ZERO;
            for r in 0..len {
                let mut row = ZERO;
                for c in 0..len {
                    row += op[(a * len + r, b * len + c)] * e[c];
                }
                acc += e[r].conj() * row;
            }
            out[a][b] = acc / len as f64;
        }
    }
    out
}

/// Scalar mode action `⟨e_n, A e_n⟩ / N`.
pub fn scalar_mode_action(op: &CMat, n: i64) -> c64 {
    let len = op.nrows();
    let e = GridFunction::mode(n, len).values;
    let mut acc = ZERO;
    for r in 0..len {
        let mut row = ZERO;
        for c in 0..len {
            row += op[(r, c)] * e[c];
        }
        acc += e[r].conj() * row;
    }
    acc / len as f64
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.max(1e-300).ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Residuals `‖(A − M) e_n‖ / ‖e_n‖` for `n ∈ [n_min, n_max]` and scalar
/// (`N×N`) operators.
pub fn residual_curve(op: &CMat, model: &CMat, n_min: i64, n_max: i64) -> Result<Vec<(i64, f64)>> {
    if op.nrows() != model.nrows() || op.ncols() != model.ncols() {
        return Err(Error::Config("operator and model sizes differ".into()));
    }
    let total = op.nrows();
    if n_min < 1 || n_max < n_min {
        return Err(Error::Config(format!("bad mode range [{n_min}, {n_max}]")));
    }
    let diff = op - model;
    let mut out = Vec::new();
    for n in n_min..=n_max {
        out.push((n, residual_norm(&diff, n, total)));
    }
    Ok(out)
}

fn residual_norm(diff: &CMat, n: i64, total: usize) -> f64 {
    let len = diff.ncols();
    let e = GridFunction::mode(n, len).values;
    let mut acc = 0.0;
    for r in 0..total {
        let mut v = ZERO;
        for c in 0..len {
            v += diff[(r, c)] * e[c];
        }
        acc += v.norm_sqr();
    }
    (acc / len as f64).sqrt()
}

fn check_band(len: usize, n_max: i64) -> Result<()> {
    if (len as i64) < 4 * n_max {
        return Err(Error::Config(format!(
            "mode range up to {n_max} needs N ≥ {} (aliasing), got N = {len}",
            4 * n_max
        )));
    }
    Ok(())
}

/// Fitted decay exponent of `‖(A − M)e_n‖` over `n ∈ [n_min, n_max]`
/// for scalar operators.
pub fn multiplier_residual_order(op: &CMat, model: &CMat, n_min: i64, n_max: i64) -> Result<f64> {
    check_band(op.ncols(), n_max)?;
    let curve = residual_curve(op, model, n_min, n_max)?;
    let (x, y): (Vec<f64>, Vec<f64>) = curve.iter().map(|&(n, r)| (n as f64, r)).unzip();
    Ok(fit_loglog_slope(&x, &y))
}

/// Residuals for a `2N×2N` block operator, combining both unit directions.
pub fn block_residual_curve(op: &CMat, model: &CMat, n_min: i64, n_max: i64) -> Result<Vec<(i64, f64)>> {
    if op.nrows() != model.nrows() || op.ncols() != model.ncols() || op.nrows() % 2 == 1 {
        return Err(Error::Config("block operator and model sizes differ".into()));
    }
    if n_min < 1 || n_max < n_min {
        return Err(Error::Config(format!("bad mode range [{n_min}, {n_max}]")));
    }
    let len = op.nrows() / 2;
    let diff = op - model;
    let mut out = Vec::new();
    for n in n_min..=n_max {
        let e = GridFunction::mode(n, len).values;
        let mut acc = 0.0;
        for b in 0..2 {
            for r in 0..2 * len {
                let mut v = ZERO;
                for c in 0..len {
                    v += diff[(r, b * len + c)] * e[c];
                }
                acc += v.norm_sqr();
            }
        }
        out.push((n, (acc / (2 * len) as f64).sqrt()));
    }
    Ok(out)
}

pub fn block_residual_order(op: &CMat, model: &CMat, n_min: i64, n_max: i64) -> Result<f64> {
    check_band(op.ncols() / 2, n_max)?;
    let curve = block_residual_curve(op, model, n_min, n_max)?;
    let (x, y): (Vec<f64>, Vec<f64>) = curve.iter().map(|&(n, r)| (n as f64, r)).unzip();
    Ok(fit_loglog_slope(&x, &y))
}

/// Principal part of the Dirichlet CFIER operator composed with `RD`:
/// `(1/(2α̃)) [[α+α̃, −(α−α̃)H], [(α−α̃)H, α+α̃]]`.
pub fn dirichlet_cfier_principal(m: &ElasticMedium) -> MatrixMultiplier {
    let a = c64::new(m.alpha(), 0.0);
    let at = m.alpha_tilde();
    MatrixMultiplier::new("A^comb·RD principal", 0.0, move |n| {
        let h = if n == 0 { ZERO } else { hilbert_symbol(n) };
        let c = 1.0 / (2.0 * at);
        [[c * (a + at), -c * (a - at) * h], [c * (a - at) * h, c * (a + at)]]
    })
}

/// Principal part of the Neumann CFIER operator `B^comb ∘ R` for `R = RN`
/// or `R = RN1`, derived from the exact circle symbols (curvature-free).
pub fn neumann_cfier_principal(m: &ElasticMedium, reg: RegularizerKind) -> Result<MatrixMultiplier> {
    let (lam, mu) = (m.lambda, m.mu);
    let kp2 = m.kp * m.kp;
    let ks2 = m.ks * m.ks;
    let tp2 = m.kp_tilde * m.kp_tilde;
    let ts2 = m.ks_tilde * m.ks_tilde;
    let at = tp2 + ts2;
    let entries: [[c64; 2]; 2] = match reg {
        RegularizerKind::RN => {
            let d = 2.0 * (2.0 * ks2 - at);
            [
                [
                    (2.0 * kp2 * lam + 3.0 * kp2 * mu + ks2 * mu - at * mu) / (mu * d),
                    -(2.0 * kp2 * lam + 3.0 * kp2 * mu - 3.0 * ks2 * mu + at * mu) / (mu * d),
                ],
                [-(kp2 + ks2 - at) / d, -(kp2 - 3.0 * ks2 + at) / d],
            ]
        }
        RegularizerKind::RN1 => [
            [
                -0.5 * (2.0 * kp2 * lam + 3.0 * kp2 * mu - ks2 * mu + 3.0 * tp2 * mu - ts2 * mu),
                0.5 * (2.0 * kp2 * lam + 3.0 * kp2 * mu - ks2 * mu + tp2 * mu - 3.0 * ts2 * mu),
            ],
            [0.5 * mu * (kp2 - ks2 + 3.0 * tp2 - ts2), 0.5 * mu * (kp2 - ks2 + tp2 - 3.0 * ts2)],
        ],
        other => {
            return Err(Error::Config(format!("{other:?} is not a Neumann regularizer")));
        }
    };
    // off-diagonal entries are stored for n > 0, where H = i
    Ok(MatrixMultiplier::new(format!("B^comb·{reg:?} principal"), 0.0, move |n| {
        let s = c64::new(0.0, sign(n));
        [[entries[0][0], entries[0][1] * s], [entries[1][0] * s, entries[1][1]]]
    }))
}

/// Dense spectral differentiation matrix `d/ds` on `len` nodes.
pub fn differentiation_matrix(len: usize) -> CMat {
    let h = 2.0 * PI / len as f64;
    CMat::from_fn(len, len, |i, j| {
        if i == j {
            ZERO
        } else {
            let d = i as f64 - j as f64;
            let sgn = if (i + len - j) % 2 == 0 { 1.0 } else { -1.0 };
            c64::new(0.5 * sgn / (d * h / 2.0).tan(), 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_numbers() {
        assert_eq!(mode_index(0, 8), 0);
        assert_eq!(mode_index(3, 8), 3);
        assert_eq!(mode_index(4, 8), -4);
        assert_eq!(mode_index(7, 8), -1);
    }

    #[test]
    fn dense_derivative_matches_multiplier() {
        let a = differentiation_matrix(16);
        let b = make_basic(BasicKind::D(1)).to_matrix(16);
        let d = crate::linalg::max_abs(&(&a - &b));
        assert!(d < 1e-12, "{d}");
    }

    #[test]
    fn branch_on_negative_axis() {
        assert_eq!(sqrt_branch(c64::new(-4.0, 0.0)), c64::new(0.0, 2.0));
        assert!((sqrt_branch(c64::new(4.0, 0.0)) - c64::new(2.0, 0.0)).norm() < 1e-15);
    }
}

/// Orthonormal basis `e_n/√N`, `|n| ≤ n_max`, as the columns of an `N×(2n_max+1)` matrix.
pub fn band_basis(len: usize, n_max: i64) -> CMat {
    let m = (2 * n_max + 1) as usize;
    let s = 1.0 / (len as f64).sqrt();
    let cols: Vec<Vec<c64>> = (-n_max..=n_max).map(|n| GridFunction::mode(n, len).values).collect();
    CMat::from_fn(len, m, |r, c| cols[c][r] * s)
}

/// Spectral norm of `A` restricted to trigonometric polynomials of degree `≤ n_max`.
///
/// Discrete identities such as `VW + ¼I = K²` fail at the Nyquist mode,
/// where the sampled derivative vanishes, so they are checked on the resolved band.
pub fn band_norm2(a: &CMat, n_max: i64) -> Result<f64> {
    check_band(a.ncols(), n_max)?;
    Ok(crate::linalg::norm2(&(a * &band_basis(a.ncols(), n_max))))
}
