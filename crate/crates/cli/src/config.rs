//! Experiment configuration (TOML).
//!
//! Every section is optional; missing keys take the defaults shown in
//! `configs/*.toml` and the README.

use crate::CliError;
use helmscatter::formulations::{Boundary, Formulation, FORMULATION_IDS};
use helmscatter::{ShapeKind, WavenumberRule};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub shapes: Vec<String>,
    /// Optional shape parameters keyed by shape id (e.g. `kite = [0.65, 1.5]`).
    pub shape_params: BTreeMap<String, Vec<f64>>,
    /// Boundary conditions to run; empty means "whatever the formulations imply".
    pub bc: Vec<String>,
    pub formulations: Vec<String>,
    pub medium: MediumConfig,
    pub incident: IncidentConfig,
    pub resolution: ResolutionConfig,
    pub solver: SolverConfig,
    pub bench: BenchConfig,
    pub spectrum: SpectrumConfig,
    pub convergence: ConvergenceConfig,
    pub psdo: PsdoConfig,
    pub output: OutputConfig,
    /// When set, wall times are kept out of the main CSVs so reruns are byte-identical.
    pub deterministic: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            shapes: vec!["circle".into()],
            shape_params: BTreeMap::new(),
            bc: Vec::new(),
            formulations: vec!["dirichlet.cfier.rd".into()],
            medium: MediumConfig::default(),
            incident: IncidentConfig::default(),
            resolution: ResolutionConfig::default(),
            solver: SolverConfig::default(),
            bench: BenchConfig::default(),
            spectrum: SpectrumConfig::default(),
            convergence: ConvergenceConfig::default(),
            psdo: PsdoConfig::default(),
            output: OutputConfig::default(),
            deterministic: true,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MediumConfig {
    pub lambda: f64,
    pub mu: f64,
    pub omega: Vec<f64>,
    /// Extra frequencies enabled by `--large`.
    pub large_omega: Vec<f64>,
    /// `"curvature"` or `"fixed"`.
    pub rule: String,
    pub eps_p: f64,
    pub eps_s: f64,
}

impl Default for MediumConfig {
    fn default() -> Self {
        MediumConfig {
            lambda: 2.0,
            mu: 1.0,
            omega: vec![10.0],
            large_omega: vec![80.0, 160.0],
            rule: "curvature".into(),
            eps_p: 1.0,
            eps_s: 1.0,
        }
    }
}

impl MediumConfig {
    pub fn wavenumber_rule(&self) -> Result<WavenumberRule, CliError> {
        match self.rule.as_str() {
            "curvature" => Ok(WavenumberRule::Curvature),
            "fixed" => Ok(WavenumberRule::Fixed { eps_p: self.eps_p, eps_s: self.eps_s }),
            other => Err(CliError::Config(format!("medium.rule must be 'curvature' or 'fixed', got '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IncidentConfig {
    /// `"plane"` or `"point"`.
    pub kind: String,
    /// Direction angle in degrees.
    pub direction: f64,
    /// Polarization angle in degrees.
    pub polarization: f64,
    /// Source point of a manufactured solution; centroid when absent.
    pub z: Option<[f64; 2]>,
}

impl Default for IncidentConfig {
    fn default() -> Self {
        // d = (0, −1), p = (1, 0): shear wave
        IncidentConfig { kind: "plane".into(), direction: -90.0, polarization: 0.0, z: None }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResolutionConfig {
    /// Points per shortest (shear) wavelength scale: `N = round_even(ppw·k_s)`.
    pub ppw: f64,
    /// Multiplier on N (e.g. 2 for the refined CFIE series).
    pub refine: usize,
    /// Fixed N overriding the rule.
    pub n: Option<usize>,
    /// Grading exponent of polygon meshes.
    pub grading: u32,
}

impl Default for ResolutionConfig {
    fn default() -> Self {
        ResolutionConfig { ppw: 8.0, refine: 1, n: None, grading: 3 }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    /// Relative residual; 1e-5 for smooth and 1e-4 for polygonal shapes when absent.
    pub tol: Option<f64>,
    /// Iteration cap (at most 2N); 1000 when absent.
    pub maxit: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchConfig {
    /// Also solve at 2N and report the far-field self-error.
    pub self_error: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    pub shape: String,
    pub omega: f64,
    pub formulations: Vec<String>,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig { shape: "kite".into(), omega: 40.0, formulations: vec!["dirichlet.cfier.rd".into()] }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceConfig {
    /// Number of grids `N₀, 2N₀, 4N₀, …`.
    pub levels: usize,
    pub directions: usize,
    /// Base N (rule-derived when absent).
    pub n0: Option<usize>,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig { levels: 3, directions: 64, n0: None }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsdoConfig {
    pub shapes: Vec<String>,
    /// Helmholtz wavenumber for the scalar BIO checks.
    pub k: f64,
    /// Frequency for the CFIER principal-part checks.
    pub omega: f64,
    pub n: usize,
    pub n_min: i64,
    pub n_max: i64,
}

impl Default for PsdoConfig {
    fn default() -> Self {
        PsdoConfig { shapes: vec!["circle".into(), "kite".into()], k: 2.0, omega: 10.0, n: 256, n_min: 8, n_max: 64 }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: Option<String>,
    /// Write the assembled system matrix of `solve` as `operator.bin`.
    pub dump_operator: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn shape_kinds(&self) -> Result<Vec<ShapeKind>, CliError> {
        self.shapes.iter().map(|s| s.parse::<ShapeKind>().map_err(CliError::from)).collect()
    }

    pub fn params(&self, kind: ShapeKind) -> Vec<f64> {
        self.shape_params.get(kind.name()).cloned().unwrap_or_default()
    }

    pub fn formulation_list(&self) -> Result<Vec<Formulation>, CliError> {
        parse_formulations(&self.formulations)
    }

    fn boundaries(&self) -> Result<Vec<Boundary>, CliError> {
        self.bc.iter().map(|b| b.parse::<Boundary>().map_err(CliError::from)).collect()
    }

    /// Reject unknown ids and formulation/bc combinations outside the supported matrix.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.shapes.is_empty() {
            return Err(CliError::Config("at least one shape is required".into()));
        }
        self.shape_kinds()?;
        let forms = self.formulation_list()?;
        let bcs = self.boundaries()?;
        if !bcs.is_empty() {
            for f in &forms {
                if !bcs.contains(&f.boundary()) {
                    let valid: Vec<&str> = FORMULATION_IDS
                        .iter()
                        .copied()
                        .filter(|id| bcs.iter().any(|b| id.starts_with(&b.to_string())))
                        .collect();
                    return Err(CliError::Config(format!(
                        "formulation '{}' does not solve the requested boundary condition(s); valid ids: {}",
                        f.id(),
                        valid.join(", ")
                    )));
                }
            }
        }
        if self.medium.omega.iter().any(|w| !(*w > 0.0)) {
            return Err(CliError::Config("all frequencies must be positive".into()));
        }
        if !(self.resolution.ppw > 0.0) || self.resolution.refine == 0 {
            return Err(CliError::Config("resolution.ppw and resolution.refine must be positive".into()));
        }
        if let Some(t) = self.solver.tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(CliError::Config(format!("solver.tol must lie in (0, 1), got {t}")));
            }
        }
        self.medium.wavenumber_rule()?;
        if !matches!(self.incident.kind.as_str(), "plane" | "point") {
            return Err(CliError::Config(format!("incident.kind must be 'plane' or 'point', got '{}'", self.incident.kind)));
        }
        parse_formulations(&self.spectrum.formulations)?;
        self.spectrum.shape.parse::<ShapeKind>()?;
        for s in &self.psdo.shapes {
            s.parse::<ShapeKind>()?;
        }
        if self.convergence.levels < 2 {
            return Err(CliError::Config("convergence.levels must be at least 2".into()));
        }
        Ok(())
    }
}

pub fn parse_formulations(ids: &[String]) -> Result<Vec<Formulation>, CliError> {
    if ids.is_empty() {
        return Err(CliError::Config(format!(
            "no formulation given; valid ids: {}",
            FORMULATION_IDS.join(", ")
        )));
    }
    ids.iter().map(|s| s.parse::<Formulation>().map_err(CliError::from)).collect()
}
