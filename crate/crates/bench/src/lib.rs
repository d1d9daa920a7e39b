//! Shared fixtures for the criterion benches.

use helmscatter::fields::IncidentField;
use helmscatter::formulations::assemble_rhs;
use helmscatter::geometry::discretize;
use helmscatter::{Curve, DensityPair, ElasticMedium, Formulation, Result, ShapeKind, WavenumberRule};

pub struct Fixture {
    pub curve: Curve,
    pub medium: ElasticMedium,
}

/// Kite at frequency `omega` with `n` nodes, default medium (λ = 2, μ = 1).
pub fn kite(omega: f64, n: usize) -> Result<Fixture> {
    let curve = discretize(ShapeKind::Kite, &[], n)?;
    let medium = ElasticMedium::new(2.0, 1.0, omega, curve.curvature_bound(), WavenumberRule::Curvature)?;
    Ok(Fixture { curve, medium })
}

impl Fixture {
    /// Shear plane wave travelling in −y.
    pub fn rhs(&self, f: Formulation) -> Result<DensityPair> {
        let inc = IncidentField::plane_wave(&self.medium, [0.0, -1.0], [1.0, 0.0])?;
        assemble_rhs(f.boundary(), &inc, &self.curve)
    }
}
