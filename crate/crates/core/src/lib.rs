//! Boundary integral solvers for time-harmonic elastic scattering in two
//! dimensions, based on the Helmholtz decomposition `u = grad u_p + curl u_s`.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: closed curves of length 2π, arc-length and graded grids.
//! * [`specfun`]: Bessel and Hankel functions.
//! * [`spectral`]: periodic grid functions and Fourier multipliers.
//! * [`bio`]: Nyström discretisation of the Helmholtz operators V, K, Kᵀ, W.
//! * [`traces`]: gradient and Hessian traces of layer potentials.
//! * [`formulations`]: the 2×2 block systems for Dirichlet and Neumann problems.
//! * [`fields`]: incident fields, manufactured solutions and far fields.
//! * [`solver`]: GMRES and dense spectra.
//! * [`io`]: CSV and binary matrix dumps.

pub mod bio;
pub mod error;
pub mod fields;
pub mod formulations;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod medium;
pub mod solver;
pub mod specfun;
pub mod spectral;
pub mod traces;

pub use error::{Error, Result};
pub use geometry::{Curve, GradedMesh, ParametricCurve, ShapeKind};
pub use linalg::{c64, CMat};
pub use medium::{ElasticMedium, WavenumberRule};
pub use spectral::{GridFunction, MatrixMultiplier, ScalarMultiplier};
pub use bio::{BioKind, DiscreteOperator};
pub use formulations::{BlockOperator, DensityPair, Formulation, SystemOperator};
pub use fields::{IncidentField, ManufacturedSolution};
pub use solver::{KrylovResult, SpectrumResult};
