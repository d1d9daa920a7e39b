//! Elastic medium: Lamé parameters, frequency and the derived wavenumbers.

use crate::error::{Error, Result};
use crate::linalg::c64;

/// How the complexified wavenumbers `k̃ = k + iε` are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WavenumberRule {
    /// `ε = 0.4 K^{2/3} k^{1/3}` with `K` the curvature bound of the boundary.
    Curvature,
    /// Fixed damping for both wavenumbers.
    Fixed { eps_p: f64, eps_s: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticMedium {
    pub lambda: f64,
    pub mu: f64,
    pub omega: f64,
    pub kp: f64,
    pub ks: f64,
    pub kp_tilde: c64,
    pub ks_tilde: c64,
}

impl ElasticMedium {
    /// Build a medium. `curvature_bound` is `max_Γ |κ|` (see
    /// [`crate::geometry::Curve::curvature_bound`]).
    pub fn new(lambda: f64, mu: f64, omega: f64, curvature_bound: f64, rule: WavenumberRule) -> Result<Self> {
        if !(mu > 0.0) || !(lambda + 2.0 * mu > 0.0) {
            return Err(Error::Config(format!(
                "Lamé parameters need mu > 0 and lambda + 2 mu > 0 (got lambda = {lambda}, mu = {mu})"
            )));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::Config(format!("frequency must be positive, got {omega}")));
        }
        let kp = omega / (lambda + 2.0 * mu).sqrt();
        let ks = omega / mu.sqrt();
        let (ep, es) = match rule {
            WavenumberRule::Curvature => {
                if !(curvature_bound > 0.0) {
                    return Err(Error::Config(format!(
                        "curvature rule needs a positive curvature bound, got {curvature_bound}"
                    )));
                }
                let c = 0.4 * curvature_bound.powf(2.0 / 3.0);
                (c * kp.cbrt(), c * ks.cbrt())
            }
            WavenumberRule::Fixed { eps_p, eps_s } => (eps_p, eps_s),
        };
        if !(ep > 0.0 && es > 0.0) {
            return Err(Error::Config("complexification must have positive imaginary part".into()));
        }
        Ok(ElasticMedium {
            lambda,
            mu,
            omega,
            kp,
            ks,
            kp_tilde: c64::new(kp, ep),
            ks_tilde: c64::new(ks, es),
        })
    }

    /// Medium with the curvature rule.
    pub fn with_curvature(lambda: f64, mu: f64, omega: f64, curvature_bound: f64) -> Result<Self> {
        Self::new(lambda, mu, omega, curvature_bound, WavenumberRule::Curvature)
    }

    /// `α = k_p² + k_s²`
    pub fn alpha(&self) -> f64 {
        self.kp * self.kp + self.ks * self.ks
    }

    /// `α̃ = k̃_p² + k̃_s²`
    pub fn alpha_tilde(&self) -> c64 {
        self.kp_tilde * self.kp_tilde + self.ks_tilde * self.ks_tilde
    }
}

/// `N = round_even(ppw · k_s)`, at least 64.
pub fn resolution_rule(ks: f64, ppw: f64) -> usize {
    let n = 2 * ((ppw * ks / 2.0).round() as usize);
    n.max(64)
}
