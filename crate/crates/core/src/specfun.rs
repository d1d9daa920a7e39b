//! Bessel and Hankel functions of integer order.
//!
//! Production evaluations of `J_ν`, `Y_ν` and `H^{(1)}_ν` (ν = 0, 1) for real
//! and complex arguments are delegated to the `complex-bessel` crate (a port of
//! the Amos library), which is accurate to a few ulps over the whole range the
//! kernels need. The ascending series and the Hankel asymptotic expansion are
//! kept here as independent reference evaluators; they are used by tests and
//! by [`hankel1_reference`].

use crate::error::{Error, Result};
use num_complex::Complex64 as c64;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Radius below which [`hankel1_reference`] uses the ascending series.
pub const SERIES_CROSSOVER_RADIUS: f64 = 12.0;

/// Real Bessel functions exposed by [`bessel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    J0,
    J1,
    Y0,
    Y1,
}

fn backend<T>(r: std::result::Result<T, complex_bessel::Error>) -> Result<T> {
    r.map_err(|e| Error::Numerical(format!("bessel backend: {e:?}")))
}

/// Real-argument Bessel functions of order 0 and 1.
pub fn bessel(kind: BesselKind, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {x}")));
    }
    match kind {
        BesselKind::J0 | BesselKind::J1 => {
            if x == 0.0 {
                return Ok(if kind == BesselKind::J0 { 1.0 } else { 0.0 });
            }
            let nu = if kind == BesselKind::J0 { 0.0 } else { 1.0 };
            let v = backend(complex_bessel::besselj(nu, c64::new(x.abs(), 0.0)))?.re;
            // J1 is odd, J0 even.
            Ok(if x < 0.0 && kind == BesselKind::J1 { -v } else { v })
        }
        BesselKind::Y0 | BesselKind::Y1 => {
            if x <= 0.0 {
                return Err(Error::Domain(format!("Y requires x > 0, got {x}")));
            }
            let nu = if kind == BesselKind::Y0 { 0.0 } else { 1.0 };
            Ok(backend(complex_bessel::bessely(nu, c64::new(x, 0.0)))?.re)
        }
    }
}

fn check_hankel_arg(z: c64) -> Result<()> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("Hankel function is singular at z = 0".into()));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    Ok(())
}

/// `H^{(1)}_order(z)` for order 0 or 1 and `Im z ≥ 0`.
pub fn hankel1(order: u32, z: c64) -> Result<c64> {
    if order > 1 {
        return Err(Error::Domain(format!("hankel1 supports orders 0 and 1, got {order}")));
    }
    check_hankel_arg(z)?;
    backend(complex_bessel::hankel1(order as f64, z))
}

/// `(H^{(1)}_0(z), H^{(1)}_1(z))` in one call.
pub fn hankel1_01(z: c64) -> Result<(c64, c64)> {
    check_hankel_arg(z)?;
    let r = backend(complex_bessel::hankel1_seq(0.0, z, 2, complex_bessel::Scaling::Unscaled))?;
    Ok((r.values[0], r.values[1]))
}

/// `(J_0(z), J_1(z))` for complex `z`.
pub fn besselj_01(z: c64) -> Result<(c64, c64)> {
    if z.norm() == 0.0 {
        return Ok((c64::new(1.0, 0.0), c64::new(0.0, 0.0)));
    }
    let r = backend(complex_bessel::besselj_seq(0.0, z, 2, complex_bessel::Scaling::Unscaled))?;
    Ok((r.values[0], r.values[1]))
}

/// Integer-order `J_n(x)` for `n = 0..=nmax` by Miller's downward recurrence,
/// normalised with `J_0 + 2 Σ J_{2k} = 1`.
pub fn besselj_orders(nmax: usize, x: f64) -> Result<Vec<f64>> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("besselj_orders requires x > 0, got {x}")));
    }
    let top = nmax.max(x.ceil() as usize);
    let mut m = top + 40 + (10.0 * (top as f64).sqrt()) as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let mut out = vec![0.0; nmax + 1];
    let (mut jp1, mut j) = (0.0_f64, 1e-300_f64);
    let mut norm = 0.0;
    for k in (0..m).rev() {
        // j holds J_{k+1}, jp1 holds J_{k+2}
        let jm = 2.0 * (k as f64 + 1.0) / x * j - jp1;
        jp1 = j;
        j = jm;
        if k <= nmax {
            out[k] = j;
        }
        if k == 0 {
            norm += j;
        } else if k % 2 == 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            let s = 1e-250;
            j *= s;
            jp1 *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    Ok(out)
}

/// Integer-order `Y_n(x)` for `n = 0..=nmax` by upward recurrence from `Y_0, Y_1`.
pub fn bessely_orders(nmax: usize, x: f64) -> Result<Vec<f64>> {
    let y0 = bessel(BesselKind::Y0, x)?;
    let y1 = bessel(BesselKind::Y1, x)?;
    let mut out = vec![y0, y1];
    for k in 1..nmax {
        let next = 2.0 * k as f64 / x * out[k] - out[k - 1];
        if !next.is_finite() || next.abs() > 1e300 {
            return Err(Error::Overflow(format!("Y_{} overflows at x = {x}", k + 1)));
        }
        out.push(next);
    }
    out.truncate(nmax + 1);
    Ok(out)
}

/// Integer-order `H^{(1)}_n(x)`, `|n| ≤ 200`, `x > 0`.
pub fn hankel1_n(n: i32, x: f64) -> Result<c64> {
    if n.unsigned_abs() > 200 {
        return Err(Error::Domain(format!("|n| ≤ 200 required, got {n}")));
    }
    let m = n.unsigned_abs() as usize;
    let j = besselj_orders(m, x)?;
    let y = bessely_orders(m, x)?;
    let h = c64::new(j[m], y[m]);
    Ok(if n < 0 && m % 2 == 1 { -h } else { h })
}

/// `(J_n(x), Y_n(x), J_n'(x), Y_n'(x))` for `n ≥ 0`.
pub fn bessel_jy_deriv(n: usize, x: f64) -> Result<(f64, f64, f64, f64)> {
    let j = besselj_orders(n + 1, x)?;
    let y = bessely_orders(n + 1, x)?;
    let nf = n as f64;
    let jd = nf / x * j[n] - j[n + 1];
    let yd = nf / x * y[n] - y[n + 1];
    Ok((j[n], y[n], jd, yd))
}

/// Ascending-series evaluation of `H^{(1)}_order(z)`, order 0 or 1.
pub fn hankel1_series(order: u32, z: c64) -> Result<c64> {
    check_hankel_arg(z)?;
    let q = -z * z / 4.0;
    let half = z / 2.0;
    let logt = half.ln();
    match order {
        0 => {
            let mut term = c64::new(1.0, 0.0);
            let mut j0 = term;
            let mut ysum = c64::new(0.0, 0.0);
            let mut harmonic = 0.0;
            for m in 1..400 {
                let mf = m as f64;
                term *= q / (mf * mf);
                harmonic += 1.0 / mf;
                j0 += term;
                // (-1)^{m+1} H_m (z²/4)^m/(m!)² = -H_m q^m/(m!)²
                ysum -= term * harmonic;
                if term.norm() < 1e-18 * j0.norm().max(1e-300) && m > 4 {
                    break;
                }
            }
            let y0 = (2.0 / PI) * ((logt + EULER_GAMMA) * j0 + ysum);
            Ok(j0 + c64::i() * y0)
        }
        1 => {
            let mut term = half;
            let mut j1 = term;
            let mut psi_sum = -2.0 * EULER_GAMMA + 1.0;
            let mut ysum = term * psi_sum;
            for k in 1..400 {
                let kf = k as f64;
                term *= q / (kf * (kf + 1.0));
                // ψ(k+1) + ψ(k+2) increments by 1/k + 1/(k+1)
                psi_sum += 1.0 / kf + 1.0 / (kf + 1.0);
                j1 += term;
                ysum += term * psi_sum;
                if term.norm() < 1e-18 * j1.norm().max(1e-300) && k > 4 {
                    break;
                }
            }
            let y1 = -2.0 / (PI * z) + (2.0 / PI) * logt * j1 - ysum / PI;
            Ok(j1 + c64::i() * y1)
        }
        _ => Err(Error::Domain(format!("order {order} unsupported"))),
    }
}

/// Hankel asymptotic expansion of `H^{(1)}_order(z)` truncated at its
/// smallest term.
pub fn hankel1_asymptotic(order: u32, z: c64) -> Result<c64> {
    check_hankel_arg(z)?;
    if order > 1 {
        return Err(Error::Domain(format!("order {order} unsupported")));
    }
    let mu = 4.0 * (order as f64).powi(2);
    let mut sum = c64::new(1.0, 0.0);
    let mut term = c64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let a = (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0);
        let next = term * c64::i() * a / z;
        let mag = next.norm();
        if mag >= last {
            break;
        }
        term = next;
        sum += term;
        last = mag;
        if mag < 1e-17 {
            break;
        }
    }
    let phase = z - (order as f64) * PI / 2.0 - PI / 4.0;
    Ok((2.0 / (PI * z)).sqrt() * (c64::i() * phase).exp() * sum)
}

/// Reference `H^{(1)}` built from the two expansions with a fixed crossover.
pub fn hankel1_reference(order: u32, z: c64) -> Result<c64> {
    if z.norm() < SERIES_CROSSOVER_RADIUS {
        hankel1_series(order, z)
    } else {
        hankel1_asymptotic(order, z)
    }
}
