//! Block boundary integral systems for the Helmholtz potentials `(u_p, u_s)`
//! of the scattered elastic field `u = ∇u_p + curl⃗ u_s`.
//!
//! Dirichlet rows are `(∂ₙu_p + ∂ₜu_s, ∂ₜu_p − ∂ₙu_s)`; Neumann rows are
//! `(2μ nn[u_p] − λk_p²u_p + 2μ tn[u_s], 2μ tn[u_p] − 2μ nn[u_s] − μk_s²u_s)`.
//! Regularized systems compose the operator on the right with `R` and
//! solve for `f`, recovering `φ = R f`.

use crate::bio::{assemble_all, tangential_derivative, BioSet, PotentialKind};
use crate::error::{Error, Result};
use crate::geometry::Curve;
use crate::linalg::{add_scalar_identity, block2, c64, identity, matvec, scale, sub_block, CMat, I, ZERO};
use crate::medium::ElasticMedium;
use crate::spectral::{make_basic, make_regularizer, BasicKind, MatrixMultiplier, RegularizerKind};
use crate::traces::{build_grad_traces, build_hess_traces, HessTraces};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Boundary {
    Dirichlet,
    Neumann,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Dirichlet => "dirichlet",
            Boundary::Neumann => "neumann",
        })
    }
}

impl FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dirichlet" | "d" => Ok(Boundary::Dirichlet),
            "neumann" | "n" => Ok(Boundary::Neumann),
            other => Err(Error::Config(format!("unknown boundary condition '{other}' (dirichlet, neumann)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DirichletReg {
    RD,
    RD1,
    RD2,
    PS,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NeumannReg {
    RN,
    RN1,
    RN2,
    PS,
}

/// Solvable formulations, addressed in configs by their string ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formulation {
    /// `A_DL − ik A_SL`; `per_field` couples with `k_p` and `k_s` separately.
    DirichletCfie { per_field: bool },
    DirichletCfier(DirichletReg),
    NeumannCfie { per_field: bool },
    NeumannCfier(NeumannReg),
}

pub const FORMULATION_IDS: [&str; 10] = [
    "dirichlet.cfie",
    "dirichlet.cfier.rd",
    "dirichlet.cfier.rd1",
    "dirichlet.cfier.rd2",
    "dirichlet.cfier.ps",
    "neumann.cfie",
    "neumann.cfier.rn",
    "neumann.cfier.rn1",
    "neumann.cfier.rn2",
    "neumann.cfier.ps",
];

impl Formulation {
    pub fn id(&self) -> &'static str {
        match self {
            Formulation::DirichletCfie { per_field: false } => "dirichlet.cfie",
            Formulation::DirichletCfie { per_field: true } => "dirichlet.cfie.perfield",
            Formulation::DirichletCfier(DirichletReg::RD) => "dirichlet.cfier.rd",
            Formulation::DirichletCfier(DirichletReg::RD1) => "dirichlet.cfier.rd1",
            Formulation::DirichletCfier(DirichletReg::RD2) => "dirichlet.cfier.rd2",
            Formulation::DirichletCfier(DirichletReg::PS) => "dirichlet.cfier.ps",
            Formulation::NeumannCfie { per_field: false } => "neumann.cfie",
            Formulation::NeumannCfie { per_field: true } => "neumann.cfie.perfield",
            Formulation::NeumannCfier(NeumannReg::RN) => "neumann.cfier.rn",
            Formulation::NeumannCfier(NeumannReg::RN1) => "neumann.cfier.rn1",
            Formulation::NeumannCfier(NeumannReg::RN2) => "neumann.cfier.rn2",
            Formulation::NeumannCfier(NeumannReg::PS) => "neumann.cfier.ps",
        }
    }

    pub fn boundary(&self) -> Boundary {
        match self {
            Formulation::DirichletCfie { .. } | Formulation::DirichletCfier(_) => Boundary::Dirichlet,
            Formulation::NeumannCfie { .. } | Formulation::NeumannCfier(_) => Boundary::Neumann,
        }
    }

    pub fn is_regularized(&self) -> bool {
        matches!(self, Formulation::DirichletCfier(_) | Formulation::NeumannCfier(_))
    }

    /// Whether complexified-wavenumber BIOs are needed.
    fn needs_complex_bios(&self) -> bool {
        matches!(
            self,
            Formulation::DirichletCfier(DirichletReg::RD | DirichletReg::RD1 | DirichletReg::RD2)
                | Formulation::NeumannCfier(NeumannReg::RN | NeumannReg::RN1 | NeumannReg::RN2)
        )
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Formulation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let f = match s.trim().to_ascii_lowercase().as_str() {
            "dirichlet.cfie" => Formulation::DirichletCfie { per_field: false },
            "dirichlet.cfie.perfield" => Formulation::DirichletCfie { per_field: true },
            "dirichlet.cfier.rd" => Formulation::DirichletCfier(DirichletReg::RD),
            "dirichlet.cfier.rd1" => Formulation::DirichletCfier(DirichletReg::RD1),
            "dirichlet.cfier.rd2" => Formulation::DirichletCfier(DirichletReg::RD2),
            "dirichlet.cfier.ps" => Formulation::DirichletCfier(DirichletReg::PS),
            "neumann.cfie" => Formulation::NeumannCfie { per_field: false },
            "neumann.cfie.perfield" => Formulation::NeumannCfie { per_field: true },
            "neumann.cfier.rn" => Formulation::NeumannCfier(NeumannReg::RN),
            "neumann.cfier.rn1" => Formulation::NeumannCfier(NeumannReg::RN1),
            "neumann.cfier.rn2" => Formulation::NeumannCfier(NeumannReg::RN2),
            "neumann.cfier.ps" => Formulation::NeumannCfier(NeumannReg::PS),
            other => {
                return Err(Error::Config(format!(
                    "unknown formulation '{other}'; valid ids: {}",
                    FORMULATION_IDS.join(", ")
                )))
            }
        };
        Ok(f)
    }
}

/// A pair of grid densities `(φ_p, φ_s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPair {
    pub p: Vec<c64>,
    pub s: Vec<c64>,
}

impl DensityPair {
    pub fn new(p: Vec<c64>, s: Vec<c64>) -> Result<Self> {
        if p.len() != s.len() {
            return Err(Error::Config(format!("density lengths differ: {} vs {}", p.len(), s.len())));
        }
        Ok(DensityPair { p, s })
    }

    pub fn zeros(n: usize) -> Self {
        DensityPair { p: vec![ZERO; n], s: vec![ZERO; n] }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn stacked(&self) -> Vec<c64> {
        let mut v = self.p.clone();
        v.extend_from_slice(&self.s);
        v
    }

    pub fn from_stacked(v: &[c64]) -> Self {
        let n = v.len() / 2;
        DensityPair { p: v[..n].to_vec(), s: v[n..].to_vec() }
    }
}

/// A `2N×2N` block operator acting on stacked pairs `[φ_p; φ_s]`.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    pub label: String,
    pub matrix: CMat,
}

impl BlockOperator {
    pub fn from_blocks(label: impl Into<String>, b: [[&CMat; 2]; 2]) -> Self {
        BlockOperator { label: label.into(), matrix: block2(b[0][0], b[0][1], b[1][0], b[1][1]) }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn block(&self, i: usize, j: usize) -> CMat {
        sub_block(&self.matrix, self.n(), i, j)
    }

    pub fn apply(&self, x: &DensityPair) -> DensityPair {
        DensityPair::from_stacked(&matvec(&self.matrix, &x.stacked()))
    }

    /// Apply block by block (used to cross-check [`BlockOperator::apply`]).
    pub fn apply_blockwise(&self, x: &DensityPair) -> DensityPair {
        let row = |i: usize| -> Vec<c64> {
            let a = matvec(&self.block(i, 0), &x.p);
            let b = matvec(&self.block(i, 1), &x.s);
            a.iter().zip(&b).map(|(u, v)| u + v).collect()
        };
        DensityPair { p: row(0), s: row(1) }
    }
}

/// Everything assembled for one (medium, curve): BIOs at the real and, when
/// requested, complexified wavenumbers.
#[derive(Debug, Clone)]
pub struct OperatorContext {
    pub medium: ElasticMedium,
    pub curve: Curve,
    pub bp: BioSet,
    pub bs: BioSet,
    pub bp_tilde: Option<BioSet>,
    pub bs_tilde: Option<BioSet>,
    pub d: CMat,
}

impl OperatorContext {
    pub fn new(medium: &ElasticMedium, curve: &Curve, with_complex: bool) -> Result<Self> {
        let bp = assemble_all(c64::new(medium.kp, 0.0), curve)?;
        let bs = assemble_all(c64::new(medium.ks, 0.0), curve)?;
        let (bp_tilde, bs_tilde) = if with_complex {
            (Some(assemble_all(medium.kp_tilde, curve)?), Some(assemble_all(medium.ks_tilde, curve)?))
        } else {
            (None, None)
        };
        Ok(OperatorContext {
            medium: *medium,
            curve: curve.clone(),
            bp,
            bs,
            bp_tilde,
            bs_tilde,
            d: tangential_derivative(curve),
        })
    }

    pub fn n(&self) -> usize {
        self.curve.n
    }

    fn tilde(&self) -> Result<(&BioSet, &BioSet)> {
        match (&self.bp_tilde, &self.bs_tilde) {
            (Some(p), Some(s)) => Ok((p, s)),
            _ => Err(Error::Config(
                "complexified-wavenumber operators were not assembled for this context".into(),
            )),
        }
    }

    /// `(W̃_p, W̃_s)` as BIOs at `k̃`, or as the `−½(n² − k̃²)^{1/2}` multipliers.
    pub fn w_tilde(&self, multiplier: bool) -> Result<(CMat, CMat)> {
        if multiplier {
            let n = self.n();
            Ok((
                make_basic(BasicKind::PsW(self.medium.kp_tilde)).to_matrix(n),
                make_basic(BasicKind::PsW(self.medium.ks_tilde)).to_matrix(n),
            ))
        } else {
            let (p, s) = self.tilde()?;
            Ok((p.w.clone(), s.w.clone()))
        }
    }

    pub fn a_dl(&self) -> BlockOperator {
        let gp = build_grad_traces(&self.bp, &self.curve);
        let gs = build_grad_traces(&self.bs, &self.curve);
        let neg_ws = scale(&gs.dn_dl, c64::new(-1.0, 0.0));
        BlockOperator::from_blocks("A_DL", [[&gp.dn_dl, &gs.dt_dl], [&gp.dt_dl, &neg_ws]])
    }

    pub fn a_sl(&self) -> BlockOperator {
        let gp = build_grad_traces(&self.bp, &self.curve);
        let gs = build_grad_traces(&self.bs, &self.curve);
        let neg = scale(&gs.dn_sl, c64::new(-1.0, 0.0));
        BlockOperator::from_blocks("A_SL", [[&gp.dn_sl, &gs.dt_sl], [&gp.dt_sl, &neg]])
    }

    fn neumann_rows(&self, hp: &HessTraces, hs: &HessTraces, label: &str) -> BlockOperator {
        let m = &self.medium;
        let two_mu = c64::new(2.0 * m.mu, 0.0);
        let b11 = &scale(&hp.nn, two_mu) - &scale(&hp.trace, c64::new(m.lambda * m.kp * m.kp, 0.0));
        let b12 = scale(&hs.nt, two_mu);
        let b21 = scale(&hp.nt, two_mu);
        let b22 = &scale(&hs.nn, -two_mu) - &scale(&hs.trace, c64::new(m.mu * m.ks * m.ks, 0.0));
        BlockOperator::from_blocks(label, [[&b11, &b12], [&b21, &b22]])
    }

    pub fn b_dl(&self) -> BlockOperator {
        let hp = build_hess_traces(PotentialKind::Double, &self.bp, &self.curve);
        let hs = build_hess_traces(PotentialKind::Double, &self.bs, &self.curve);
        self.neumann_rows(&hp, &hs, "B_DL")
    }

    pub fn b_sl(&self) -> BlockOperator {
        let hp = build_hess_traces(PotentialKind::Single, &self.bp, &self.curve);
        let hs = build_hess_traces(PotentialKind::Single, &self.bs, &self.curve);
        self.neumann_rows(&hp, &hs, "B_SL")
    }

    /// `X_DL − ik X_SL` with coupling `k_p` (or `k_p`, `k_s` per field).
    fn cfie(&self, dl: &BlockOperator, sl: &BlockOperator, per_field: bool, label: &str) -> BlockOperator {
        let n = self.n();
        let m = &self.medium;
        let (cp, cs) = if per_field { (m.kp, m.ks) } else { (m.kp, m.kp) };
        let coupling: Vec<c64> = (0..2 * n).map(|i| -I * if i < n { cp } else { cs }).collect();
        let scaled = crate::linalg::col_scale_c(&sl.matrix, &coupling);
        BlockOperator { label: label.into(), matrix: &dl.matrix + &scaled }
    }

    /// `X_DL − 2 X_SL diag(W̃_p, W̃_s)`.
    fn comb(&self, dl: &BlockOperator, sl: &BlockOperator, multiplier: bool, label: &str) -> Result<BlockOperator> {
        let (wp, ws) = self.w_tilde(multiplier)?;
        let two = c64::new(-2.0, 0.0);
        let b = |i: usize, j: usize| -> CMat {
            let w = if j == 0 { &wp } else { &ws };
            &dl.block(i, j) + &scale(&(&sl.block(i, j) * w), two)
        };
        let (b11, b12, b21, b22) = (b(0, 0), b(0, 1), b(1, 0), b(1, 1));
        Ok(BlockOperator::from_blocks(label, [[&b11, &b12], [&b21, &b22]]))
    }

    pub fn a_cfie(&self, per_field: bool) -> BlockOperator {
        self.cfie(&self.a_dl(), &self.a_sl(), per_field, "A_CFIE")
    }

    pub fn b_cfie(&self, per_field: bool) -> BlockOperator {
        self.cfie(&self.b_dl(), &self.b_sl(), per_field, "B_CFIE")
    }

    pub fn a_comb(&self, multiplier: bool) -> Result<BlockOperator> {
        self.comb(&self.a_dl(), &self.a_sl(), multiplier, "A_comb")
    }

    pub fn b_comb(&self, multiplier: bool) -> Result<BlockOperator> {
        self.comb(&self.b_dl(), &self.b_sl(), multiplier, "B_comb")
    }

    /// `2N×2N` right factor of a Dirichlet regularizer.
    pub fn dirichlet_regularizer(&self, reg: DirichletReg) -> Result<RightFactor> {
        let n = self.n();
        match reg {
            DirichletReg::RD | DirichletReg::PS => {
                Ok(RightFactor::Multiplier(make_regularizer(RegularizerKind::RD, &self.medium, n)?))
            }
            DirichletReg::RD1 => Ok(RightFactor::Multiplier(make_regularizer(RegularizerKind::RD1, &self.medium, n)?)),
            DirichletReg::RD2 => {
                let (p, s) = self.tilde()?;
                let c = -2.0 / self.medium.alpha_tilde();
                let w_s = scale(&s.w, 2.0 * c);
                let w_p = scale(&p.w, -2.0 * c);
                let d = scale(&self.d, c);
                Ok(RightFactor::Dense(block2(&w_s, &d, &d, &w_p)))
            }
        }
    }

    /// `2N×2N` right factor of a Neumann regularizer.
    pub fn neumann_regularizer(&self, reg: NeumannReg) -> Result<RightFactor> {
        let n = self.n();
        match reg {
            NeumannReg::RN | NeumannReg::PS => {
                Ok(RightFactor::Multiplier(make_regularizer(RegularizerKind::RN, &self.medium, n)?))
            }
            NeumannReg::RN1 => Ok(RightFactor::Multiplier(make_regularizer(RegularizerKind::RN1, &self.medium, n)?)),
            NeumannReg::RN2 => {
                let (p, s) = self.tilde()?;
                let id = identity(n);
                let neg_id = scale(&id, c64::new(-1.0, 0.0));
                let dvs = scale(&(&self.d * &s.v), c64::new(-2.0, 0.0));
                let dvp = scale(&(&self.d * &p.v), c64::new(-2.0, 0.0));
                Ok(RightFactor::Dense(block2(&id, &dvs, &dvp, &neg_id)))
            }
        }
    }
}

/// Densities of the four Helmholtz potentials representing the scattered
/// field: `u_p = DL_{k_p}[dl.p] + SL_{k_p}[sl.p]`, likewise for `u_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub dl: DensityPair,
    pub sl: DensityPair,
}

/// Right factor of a regularized system.
#[derive(Debug, Clone)]
pub enum RightFactor {
    Multiplier(MatrixMultiplier),
    Dense(CMat),
}

impl RightFactor {
    pub fn apply(&self, x: &[c64]) -> Vec<c64> {
        match self {
            RightFactor::Multiplier(m) => m.apply_stacked(x),
            RightFactor::Dense(a) => matvec(a, x),
        }
    }

    pub fn to_matrix(&self, n: usize) -> CMat {
        match self {
            RightFactor::Multiplier(m) => m.to_matrix(n),
            RightFactor::Dense(a) => a.clone(),
        }
    }
}

/// A linear map on stacked `2N` vectors.
pub trait LinearMap: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[c64]) -> Vec<c64>;
}

impl LinearMap for CMat {
    fn dim(&self) -> usize {
        self.nrows()
    }
    fn apply(&self, x: &[c64]) -> Vec<c64> {
        matvec(self, x)
    }
}

impl LinearMap for BlockOperator {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }
    fn apply(&self, x: &[c64]) -> Vec<c64> {
        matvec(&self.matrix, x)
    }
}

/// The linear system handed to GMRES: `base · R` with `R` applied
/// matrix-free when it is a Fourier multiplier.
#[derive(Debug, Clone)]
pub struct SystemOperator {
    pub formulation: Formulation,
    pub medium: ElasticMedium,
    pub base: CMat,
    pub regularizer: Option<RightFactor>,
    /// Right factor `S` of the SL part of the representation (`SL[S φ]`).
    sl_factor: SlFactor,
}

#[derive(Debug, Clone)]
enum SlFactor {
    Coupling(c64, c64),
    Matrices(CMat, CMat),
}

impl LinearMap for SystemOperator {
    fn dim(&self) -> usize {
        self.base.nrows()
    }
    fn apply(&self, x: &[c64]) -> Vec<c64> {
        match &self.regularizer {
            Some(r) => matvec(&self.base, &r.apply(x)),
            None => matvec(&self.base, x),
        }
    }
}

impl SystemOperator {
    pub fn n(&self) -> usize {
        self.base.nrows() / 2
    }

    /// Flattened dense `2N×2N` matrix.
    pub fn matrix(&self) -> CMat {
        match &self.regularizer {
            Some(r) => &self.base * &r.to_matrix(self.n()),
            None => self.base.clone(),
        }
    }

    pub fn as_block(&self) -> BlockOperator {
        BlockOperator { label: self.formulation.id().into(), matrix: self.matrix() }
    }

    /// Layer-potential densities from the GMRES solution.
    pub fn representation(&self, solution: &[c64]) -> Representation {
        let phi = match &self.regularizer {
            Some(r) => r.apply(solution),
            None => solution.to_vec(),
        };
        let phi = DensityPair::from_stacked(&phi);
        let sl = match &self.sl_factor {
            SlFactor::Coupling(cp, cs) => DensityPair {
                p: phi.p.iter().map(|v| v * cp).collect(),
                s: phi.s.iter().map(|v| v * cs).collect(),
            },
            SlFactor::Matrices(wp, ws) => DensityPair {
                p: matvec(wp, &phi.p).iter().map(|v| v * -2.0).collect(),
                s: matvec(ws, &phi.s).iter().map(|v| v * -2.0).collect(),
            },
        };
        Representation { dl: phi, sl }
    }
}

/// Assemble the system operator of a formulation.
pub fn assemble_system(formulation: Formulation, medium: &ElasticMedium, curve: &Curve) -> Result<SystemOperator> {
    let ctx = OperatorContext::new(medium, curve, formulation.needs_complex_bios())?;
    system_from_context(formulation, &ctx)
}

pub fn system_from_context(formulation: Formulation, ctx: &OperatorContext) -> Result<SystemOperator> {
    let m = ctx.medium;
    let coupling = |per_field: bool| {
        let cs = if per_field { m.ks } else { m.kp };
        SlFactor::Coupling(-I * m.kp, -I * cs)
    };
    let (base, regularizer, sl_factor) = match formulation {
        Formulation::DirichletCfie { per_field } => (ctx.a_cfie(per_field).matrix, None, coupling(per_field)),
        Formulation::NeumannCfie { per_field } => (ctx.b_cfie(per_field).matrix, None, coupling(per_field)),
        Formulation::DirichletCfier(reg) => {
            let ps = reg == DirichletReg::PS;
            let a = ctx.a_comb(ps)?;
            let r = ctx.dirichlet_regularizer(reg)?;
            let (wp, ws) = ctx.w_tilde(ps)?;
            (a.matrix, Some(r), SlFactor::Matrices(wp, ws))
        }
        Formulation::NeumannCfier(reg) => {
            let ps = reg == NeumannReg::PS;
            let b = ctx.b_comb(ps)?;
            let r = ctx.neumann_regularizer(reg)?;
            let (wp, ws) = ctx.w_tilde(ps)?;
            (b.matrix, Some(r), SlFactor::Matrices(wp, ws))
        }
    };
    Ok(SystemOperator { formulation, medium: m, base, regularizer, sl_factor })
}

/// Right-hand side `−(u^inc·n, u^inc·t)` or `−(Tu^inc·n, Tu^inc·t)`.
pub fn assemble_rhs(boundary: Boundary, incident: &crate::fields::IncidentField, curve: &Curve) -> Result<DensityPair> {
    let n = curve.n;
    let mut p = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    for j in 0..n {
        let x = curve.x[j];
        let nr = curve.normal[j];
        let t = curve.t[j];
        let v = match boundary {
            Boundary::Dirichlet => incident.displacement(x)?,
            Boundary::Neumann => incident.traction(x, nr)?,
        };
        p.push(-(v[0] * nr[0] + v[1] * nr[1]));
        s.push(-(v[0] * t[0] + v[1] * t[1]));
    }
    Ok(DensityPair { p, s })
}

/// `A + c·I` on a block operator (test helper).
pub fn shift(op: &BlockOperator, c: c64) -> BlockOperator {
    BlockOperator { label: op.label.clone(), matrix: add_scalar_identity(&op.matrix, c) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FORMULATION_IDS {
            let f: Formulation = id.parse().unwrap();
            assert_eq!(f.id(), id);
        }
        let e = "dirichlet.cfier.rn".parse::<Formulation>().unwrap_err();
        assert!(format!("{e}").contains("dirichlet.cfier.rd"));
    }
}
