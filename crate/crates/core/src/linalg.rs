//! Dense complex matrix helpers on top of `faer`.

use faer::Mat;
pub use num_complex::Complex64;

#[allow(non_camel_case_types)]
pub type c64 = Complex64;

/// Dense complex matrix.
pub type CMat = Mat<c64>;

pub const ZERO: c64 = c64::new(0.0, 0.0);
pub const ONE: c64 = c64::new(1.0, 0.0);
pub const I: c64 = c64::new(0.0, 1.0);

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

pub fn identity(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

pub fn diag(d: &[c64]) -> CMat {
    let n = d.len();
    CMat::from_fn(n, n, |i, j| if i == j { d[i] } else { ZERO })
}

pub fn diag_real(d: &[f64]) -> CMat {
    let n = d.len();
    CMat::from_fn(n, n, |i, j| if i == j { c64::new(d[i], 0.0) } else { ZERO })
}

pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    a * b
}

pub fn add(a: &CMat, b: &CMat) -> CMat {
    a + b
}

pub fn sub(a: &CMat, b: &CMat) -> CMat {
    a - b
}

pub fn scale(a: &CMat, s: c64) -> CMat {
    faer::Scale(s) * a
}

pub fn scale_real(a: &CMat, s: f64) -> CMat {
    faer::Scale(c64::new(s, 0.0)) * a
}

/// `a + s·b`
pub fn axpy(a: &CMat, s: c64, b: &CMat) -> CMat {
    a + faer::Scale(s) * b
}

/// `diag(d) · a`
pub fn row_scale(d: &[f64], a: &CMat) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * d[i])
}

/// `a · diag(d)`
pub fn col_scale(a: &CMat, d: &[f64]) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * d[j])
}

/// `a · diag(d)` with a complex diagonal.
pub fn col_scale_c(a: &CMat, d: &[c64]) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * d[j])
}

/// `diag(l) · a · diag(r)`
pub fn sandwich(l: &[f64], a: &CMat, r: &[f64]) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * (l[i] * r[j]))
}

/// Real diagonal added to a square matrix: `a + diag(d)`.
pub fn add_diag(a: &CMat, d: &[c64]) -> CMat {
    let mut out = a.clone();
    for (i, v) in d.iter().enumerate() {
        out[(i, i)] += *v;
    }
    out
}

pub fn add_scalar_identity(a: &CMat, s: c64) -> CMat {
    let mut out = a.clone();
    for i in 0..a.nrows().min(a.ncols()) {
        out[(i, i)] += s;
    }
    out
}

pub fn matvec(a: &CMat, x: &[c64]) -> Vec<c64> {
    let n = a.nrows();
    let m = a.ncols();
    assert_eq!(m, x.len(), "matvec dimension mismatch");
    let mut y = vec![ZERO; n];
    // column-major storage: accumulate column by column in a fixed order
    for j in 0..m {
        let xj = x[j];
        if xj == ZERO {
            continue;
        }
        let col = a.col(j);
        for i in 0..n {
            y[i] += col[i] * xj;
        }
    }
    y
}

pub fn transpose(a: &CMat) -> CMat {
    a.transpose().to_owned()
}

pub fn frobenius(a: &CMat) -> f64 {
    a.norm_l2()
}

/// Spectral norm (largest singular value).
pub fn norm2(a: &CMat) -> f64 {
    match a.singular_values() {
        Ok(s) => s.into_iter().fold(0.0, f64::max),
        Err(_) => a.norm_l2(),
    }
}

pub fn vec_norm(x: &[c64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &CMat) -> f64 {
    let mut m = 0.0_f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

/// Assemble a 2×2 block matrix.
pub fn block2(a11: &CMat, a12: &CMat, a21: &CMat, a22: &CMat) -> CMat {
    let n = a11.nrows();
    let m = a11.ncols();
    CMat::from_fn(2 * n, 2 * m, |i, j| match (i < n, j < m) {
        (true, true) => a11[(i, j)],
        (true, false) => a12[(i, j - m)],
        (false, true) => a21[(i - n, j)],
        (false, false) => a22[(i - n, j - m)],
    })
}

/// Extract block `(bi, bj)` of size `n×n` from a `2n×2n` matrix.
pub fn sub_block(a: &CMat, n: usize, bi: usize, bj: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| a[(bi * n + i, bj * n + j)])
}
