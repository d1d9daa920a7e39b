#![allow(dead_code)]

use helmscatter::linalg::c64;
use helmscatter::specfun::bessel_jy_deriv;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;

/// Separation-of-variables eigenvalues `(V, K, W)` of mode `n` on the unit
/// circle, from integer-order Bessel values.
pub fn circle_eigs(k: f64, n: i64) -> (c64, c64, c64) {
    let (j, y, jd, yd) = bessel_jy_deriv(n.unsigned_abs() as usize, k).unwrap();
    let h = c64::new(j, y);
    let hd = c64::new(jd, yd);
    let i = c64::new(0.0, 1.0);
    let v = i * PI / 2.0 * j * h;
    let kk = i * PI / 4.0 * k * (jd * h + j * hd);
    let w = i * PI / 2.0 * k * k * jd * hd;
    (v, kk, w)
}

/// Random trigonometric polynomial of degree ≤ `deg` sampled on `n` nodes.
pub fn random_trig(rng: &mut StdRng, n: usize, deg: i64) -> Vec<c64> {
    let coeffs: Vec<(i64, c64)> = (-deg..=deg)
        .map(|m| (m, c64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    (0..n)
        .map(|j| {
            let s = 2.0 * PI * j as f64 / n as f64;
            coeffs.iter().map(|(m, c)| c * c64::from_polar(1.0, *m as f64 * s)).sum()
        })
        .collect()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn max_norm(v: &[c64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn diff_max(a: &[c64], b: &[c64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}
