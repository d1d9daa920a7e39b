//! Full GMRES and dense spectra.

use crate::error::{Error, Result};
use crate::formulations::{DensityPair, LinearMap};
use crate::linalg::{add_scalar_identity, c64, matvec, vec_norm, CMat, ZERO};
use faer::linalg::solvers::Solve;

/// Default relative residual for smooth scatterers.
pub const TOL_SMOOTH: f64 = 1e-5;
/// Default relative residual for Lipschitz scatterers.
pub const TOL_LIPSCHITZ: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct KrylovResult {
    pub solution: DensityPair,
    pub iterations: usize,
    /// `‖r_k‖/‖r₀‖` for `k = 0..=iterations`.
    pub history: Vec<f64>,
    pub converged: bool,
}

impl KrylovResult {
    pub fn final_residual(&self) -> f64 {
        *self.history.last().unwrap_or(&0.0)
    }
}

fn dot(a: &[c64], b: &[c64]) -> c64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Complex Givens rotation zeroing `b` in `(a, b)`.
fn givens(a: c64, b: c64) -> (f64, c64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    if a == ZERO {
        return (0.0, b.conj() / b.norm());
    }
    let na = a.norm();
    let r = na.hypot(b.norm());
    let c = na / r;
    let s = (a / na) * b.conj() / r;
    (c, s)
}

/// Full GMRES with modified Gram–Schmidt Arnoldi, `x₀ = 0`. Stops when the
/// Arnoldi residual estimate `‖r_k‖/‖b‖` drops to `tol` or after `maxit`
/// steps.
pub fn gmres<A: LinearMap + ?Sized>(op: &A, rhs: &DensityPair, tol: f64, maxit: usize) -> Result<KrylovResult> {
    let dim = op.dim();
    let b = rhs.stacked();
    if b.len() != dim {
        return Err(Error::Config(format!("rhs length {} does not match operator size {dim}", b.len())));
    }
    if maxit > dim {
        return Err(Error::Config(format!("maxit {maxit} exceeds the system size {dim}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Config(format!("GMRES tolerance must be positive, got {tol}")));
    }
    let beta = vec_norm(&b);
    if beta == 0.0 {
        return Ok(KrylovResult {
            solution: DensityPair::zeros(dim / 2),
            iterations: 0,
            history: vec![0.0],
            converged: true,
        });
    }
    let mut basis: Vec<Vec<c64>> = vec![b.iter().map(|v| v / beta).collect()];
    // columns of the rotated Hessenberg matrix
    let mut r_cols: Vec<Vec<c64>> = Vec::new();
    let mut rots: Vec<(f64, c64)> = Vec::new();
    let mut g = vec![c64::new(beta, 0.0)];
    let mut history = vec![1.0];
    let mut converged = false;
    for j in 0..maxit {
        let mut w = op.apply(&basis[j]);
        let mut h = vec![ZERO; j + 2];
        for (i, v) in basis.iter().enumerate() {
            let hij = dot(v, &w);
            for (wk, vk) in w.iter_mut().zip(v) {
                *wk -= hij * vk;
            }
            h[i] = hij;
        }
        let hn = vec_norm(&w);
        h[j + 1] = c64::new(hn, 0.0);
        for (i, &(c, s)) in rots.iter().enumerate() {
            let (a, bb) = (h[i], h[i + 1]);
            h[i] = c * a + s * bb;
            h[i + 1] = -s.conj() * a + c * bb;
        }
        let (c, s) = givens(h[j], h[j + 1]);
        h[j] = c * h[j] + s * h[j + 1];
        h[j + 1] = ZERO;
        rots.push((c, s));
        let gj = g[j];
        g[j] = c * gj;
        g.push(-s.conj() * gj);
        r_cols.push(h);
        let rel = (g[j + 1].norm() / beta).min(*history.last().unwrap());
        history.push(rel);
        if rel <= tol {
            converged = true;
            break;
        }
        if hn <= 1e-14 * beta {
            // happy breakdown: the Krylov space is invariant
            converged = rel <= tol;
            break;
        }
        basis.push(w.iter().map(|v| v / hn).collect());
    }
    let m = r_cols.len();
    let mut y = vec![ZERO; m];
    for i in (0..m).rev() {
        let mut acc = g[i];
        for k in i + 1..m {
            acc -= r_cols[k][i] * y[k];
        }
        y[i] = acc / r_cols[i][i];
    }
    let mut x = vec![ZERO; dim];
    for (yk, v) in y.iter().zip(&basis) {
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += yk * vi;
        }
    }
    if converged {
        // confirm with the true residual; rounding can only make it slightly larger
        let ax = op.apply(&x);
        let true_res = ax.iter().zip(&b).map(|(p, q)| (q - p).norm_sqr()).sum::<f64>().sqrt() / beta;
        if true_res > 10.0 * tol {
            converged = false;
        }
    }
    Ok(KrylovResult { solution: DensityPair::from_stacked(&x), iterations: m, history, converged })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Eigenvalues sorted by increasing modulus.
    pub eigenvalues: Vec<c64>,
}

/// Maximum `N` (half the matrix size) accepted by [`spectrum`].
pub const SPECTRUM_MAX_N: usize = 2048;

/// All eigenvalues of a dense square matrix.
pub fn spectrum(matrix: &CMat) -> Result<SpectrumResult> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::Config("spectrum needs a square matrix".into()));
    }
    if matrix.nrows() > 2 * SPECTRUM_MAX_N {
        return Err(Error::Config(format!(
            "dense spectrum limited to N <= {SPECTRUM_MAX_N} (matrix size {})",
            matrix.nrows()
        )));
    }
    let mut ev = matrix
        .eigenvalues()
        .map_err(|e| Error::Numerical(format!("eigenvalue iteration did not converge: {e:?}")))?;
    if ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    ev.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im)));
    Ok(SpectrumResult { eigenvalues: ev })
}

/// Refine an approximate eigenvalue by shifted inverse iteration and return
/// `(λ, ‖Av − λv‖/‖v‖)`.
pub fn refine_eigenpair(matrix: &CMat, lambda: c64, steps: usize) -> Result<(c64, f64)> {
    let n = matrix.nrows();
    let shift = lambda + c64::new(1e-9 * lambda.norm().max(1.0), 0.0);
    let lu = add_scalar_identity(matrix, -shift).partial_piv_lu();
    let mut v = CMat::from_fn(n, 1, |i, _| c64::new(1.0 + (i as f64 * 0.37).sin(), (i as f64 * 0.91).cos()));
    let mut lam = lambda;
    let mut res = f64::INFINITY;
    for _ in 0..steps.max(1) {
        let w = lu.solve(&v);
        let nrm = w.norm_l2();
        if !(nrm > 0.0 && nrm.is_finite()) {
            return Err(Error::Numerical("inverse iteration broke down".into()));
        }
        v = CMat::from_fn(n, 1, |i, _| w[(i, 0)] / nrm);
        let col: Vec<c64> = (0..n).map(|i| v[(i, 0)]).collect();
        let av = matvec(matrix, &col);
        lam = dot(&col, &av);
        res = av.iter().zip(&col).map(|(a, x)| (a - lam * x).norm_sqr()).sum::<f64>().sqrt();
    }
    Ok((lam, res))
}
