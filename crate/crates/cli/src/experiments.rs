//! Experiment drivers behind the CLI subcommands. Each returns its records
//! so the acceptance suite can inspect them without parsing files.

use crate::config::{parse_formulations, ExperimentConfig};
use crate::svg::{line_plot, scatter_plot, Series};
use crate::CliError;
use helmscatter::bio::{assemble_all, BioSet};
use helmscatter::fields::{directions, pattern_rel_error, ScatteredField, Vec2};
use helmscatter::formulations::{assemble_rhs, assemble_system, Boundary, Representation, SystemOperator};
use helmscatter::geometry::discretize;
use helmscatter::io::{fmt_f64, write_atomic, CsvTable};
use helmscatter::linalg::{c64, row_scale, scale, CMat};
use helmscatter::medium::resolution_rule;
use helmscatter::solver::{gmres, spectrum, KrylovResult, SpectrumResult, TOL_LIPSCHITZ, TOL_SMOOTH};
use helmscatter::spectral::{
    block_residual_order, dirichlet_cfier_principal, make_basic, multiplier_residual_order, neumann_cfier_principal,
    BasicKind, RegularizerKind,
};
use helmscatter::{Curve, ElasticMedium, Formulation, IncidentField, ManufacturedSolution, ShapeKind};
use rayon::prelude::*;
use std::path::Path;
use std::time::Instant;

/// Number of far-field directions used for self-errors.
pub const FAR_FIELD_DIRECTIONS: usize = 64;

/// A discretised scatterer with its medium at one frequency.
#[derive(Debug, Clone)]
pub struct Setup {
    pub shape: ShapeKind,
    pub omega: f64,
    pub curve: Curve,
    pub medium: ElasticMedium,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Round `n` up so that graded meshes get an even multiple of the side count.
pub fn admissible_n(shape: ShapeKind, n: usize) -> usize {
    let sides = match shape {
        ShapeKind::Square => 4,
        ShapeKind::LShape => 6,
        _ => 1,
    };
    let step = 2 * sides / gcd(2, sides);
    n.div_ceil(step) * step
}

/// `N` from the resolution rule (or the fixed override), times `refine`.
pub fn grid_size(cfg: &ExperimentConfig, shape: ShapeKind, omega: f64) -> usize {
    let base = match cfg.resolution.n {
        Some(n) => n,
        None => resolution_rule(omega / cfg.medium.mu.sqrt(), cfg.resolution.ppw),
    };
    admissible_n(shape, base * cfg.resolution.refine)
}

pub fn setup(cfg: &ExperimentConfig, shape: ShapeKind, omega: f64, n: usize) -> Result<Setup, CliError> {
    let curve = if shape.is_smooth() {
        discretize(shape, &cfg.params(shape), n)?
    } else {
        helmscatter::geometry::graded_nodes(shape, cfg.resolution.grading, n)?
    };
    let medium = ElasticMedium::new(
        cfg.medium.lambda,
        cfg.medium.mu,
        omega,
        curve.curvature_bound(),
        cfg.medium.wavenumber_rule()?,
    )?;
    Ok(Setup { shape, omega, curve, medium })
}

pub fn default_tol(cfg: &ExperimentConfig, shape: ShapeKind) -> f64 {
    cfg.solver.tol.unwrap_or(if shape.is_smooth() { TOL_SMOOTH } else { TOL_LIPSCHITZ })
}

/// Iteration cap: the configured value (default 1000), at most `2N`.
pub fn max_iterations(cfg: &ExperimentConfig, n: usize) -> usize {
    cfg.solver.maxit.unwrap_or(1000).min(2 * n)
}

pub fn incident_field(cfg: &ExperimentConfig, s: &Setup) -> Result<IncidentField, CliError> {
    let inc = &cfg.incident;
    match inc.kind.as_str() {
        "plane" => Ok(IncidentField::plane_wave_angles(
            &s.medium,
            inc.direction.to_radians(),
            inc.polarization.to_radians(),
        )?),
        _ => Ok(IncidentField::from_manufactured(&manufactured(cfg, s)?)?),
    }
}

pub fn manufactured(cfg: &ExperimentConfig, s: &Setup) -> Result<ManufacturedSolution, CliError> {
    Ok(match cfg.incident.z {
        Some(z) => ManufacturedSolution::new(&s.medium, z, &s.curve)?,
        None => ManufacturedSolution::at_centroid(&s.medium, &s.curve)?,
    })
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub krylov: KrylovResult,
    pub representation: Representation,
    pub system: SystemOperator,
    pub wall_time: f64,
}

impl SolveOutcome {
    pub fn far_field(&self, s: &Setup, dirs: &[[f64; 2]]) -> Vec<Vec2> {
        ScatteredField::new(&s.medium, &s.curve, &self.representation).far_field(dirs)
    }
}

pub fn solve_setup(
    s: &Setup,
    formulation: Formulation,
    incident: &IncidentField,
    tol: f64,
    maxit: usize,
) -> Result<SolveOutcome, CliError> {
    let start = Instant::now();
    let system = assemble_system(formulation, &s.medium, &s.curve)?;
    let rhs = assemble_rhs(formulation.boundary(), incident, &s.curve)?;
    let krylov = gmres(&system, &rhs, tol, maxit)?;
    let representation = system.representation(&krylov.solution.stacked());
    Ok(SolveOutcome { krylov, representation, system, wall_time: start.elapsed().as_secs_f64() })
}

/// One row of `bench.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub shape: ShapeKind,
    pub bc: Boundary,
    pub formulation: Formulation,
    pub omega: f64,
    pub n: usize,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time: f64,
    pub ff_self_error: Option<f64>,
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_else(|| "nan".into())
}

fn bench_cell(
    cfg: &ExperimentConfig,
    shape: ShapeKind,
    formulation: Formulation,
    omega: f64,
) -> Result<BenchRecord, CliError> {
    let n = grid_size(cfg, shape, omega);
    let s = setup(cfg, shape, omega, n)?;
    let inc = incident_field(cfg, &s)?;
    let tol = default_tol(cfg, shape);
    let out = solve_setup(&s, formulation, &inc, tol, max_iterations(cfg, n))?;
    let ff_self_error = if cfg.bench.self_error {
        let s2 = setup(cfg, shape, omega, admissible_n(shape, 2 * n))?;
        let inc2 = incident_field(cfg, &s2)?;
        let fine = solve_setup(&s2, formulation, &inc2, tol, max_iterations(cfg, 2 * n))?;
        let dirs = directions(FAR_FIELD_DIRECTIONS);
        Some(pattern_rel_error(&out.far_field(&s, &dirs), &fine.far_field(&s2, &dirs)))
    } else {
        None
    };
    Ok(BenchRecord {
        shape,
        bc: formulation.boundary(),
        formulation,
        omega,
        n,
        iterations: out.krylov.iterations,
        converged: out.krylov.converged,
        wall_time: out.wall_time,
        ff_self_error,
    })
}

/// Frequencies of a sweep (`large` appends `medium.large_omega`).
pub fn sweep_frequencies(cfg: &ExperimentConfig, large: bool) -> Vec<f64> {
    let mut w = cfg.medium.omega.clone();
    if large {
        w.extend(cfg.medium.large_omega.iter().copied());
    }
    w
}

/// Iteration counts over shapes × formulations × frequencies.
pub fn bench_iters(cfg: &ExperimentConfig, large: bool) -> Result<Vec<BenchRecord>, CliError> {
    cfg.validate()?;
    let shapes = cfg.shape_kinds()?;
    let forms = cfg.formulation_list()?;
    let omegas = sweep_frequencies(cfg, large);
    let mut cells = Vec::new();
    for (si, &shape) in shapes.iter().enumerate() {
        for (fi, &f) in forms.iter().enumerate() {
            for (wi, &w) in omegas.iter().enumerate() {
                cells.push(((si, fi, wi), shape, f, w));
            }
        }
    }
    let mut done: Vec<((usize, usize, usize), BenchRecord)> = cells
        .par_iter()
        .map(|&(key, shape, f, w)| bench_cell(cfg, shape, f, w).map(|r| (key, r)))
        .collect::<Result<_, _>>()?;
    done.sort_by_key(|(k, _)| *k);
    Ok(done.into_iter().map(|(_, r)| r).collect())
}

pub fn bench_table(cfg: &ExperimentConfig, records: &[BenchRecord]) -> CsvTable {
    let mut cols = vec!["shape", "bc", "formulation", "omega", "N", "iters", "converged", "ff_self_error"];
    if !cfg.deterministic {
        cols.push("wall_time");
    }
    let mut t = CsvTable::new(&cols);
    t.meta("lambda", cfg.medium.lambda);
    t.meta("mu", cfg.medium.mu);
    t.meta("ks_over_kp", fmt_f64(((cfg.medium.lambda + 2.0 * cfg.medium.mu) / cfg.medium.mu).sqrt()));
    t.meta("ppw", cfg.resolution.ppw);
    t.meta("refine", cfg.resolution.refine);
    for r in records {
        let mut row = vec![
            r.shape.name().to_string(),
            r.bc.to_string(),
            r.formulation.id().to_string(),
            fmt_f64(r.omega),
            r.n.to_string(),
            r.iterations.to_string(),
            r.converged.to_string(),
            opt(r.ff_self_error),
        ];
        if !cfg.deterministic {
            row.push(fmt_f64(r.wall_time));
        }
        t.rows.push(row);
    }
    t
}

pub fn timing_table(records: &[BenchRecord]) -> CsvTable {
    let mut t = CsvTable::new(&["shape", "formulation", "omega", "N", "wall_time"]);
    for r in records {
        t.rows.push(vec![
            r.shape.name().into(),
            r.formulation.id().into(),
            fmt_f64(r.omega),
            r.n.to_string(),
            format!("{:.3}", r.wall_time),
        ]);
    }
    t
}

pub fn bench_svg(records: &[BenchRecord]) -> String {
    let mut series: Vec<Series> = Vec::new();
    for r in records {
        let label = format!("{} {}", r.shape.name(), r.formulation.id());
        match series.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push((r.omega, r.iterations as f64)),
            None => series.push(Series { label, points: vec![(r.omega, r.iterations as f64)] }),
        }
    }
    line_plot("GMRES iterations", "omega", "iterations", &series)
}

pub fn write_bench(cfg: &ExperimentConfig, records: &[BenchRecord], out: &Path) -> Result<(), CliError> {
    bench_table(cfg, records).write(&out.join("bench.csv"))?;
    write_atomic(&out.join("bench.svg"), bench_svg(records).as_bytes())?;
    if cfg.deterministic {
        timing_table(records).write(&out.join("bench_timing.csv"))?;
    }
    Ok(())
}

/// Result of the `solve` subcommand.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub setup: Setup,
    pub record: BenchRecord,
    pub far_field: Vec<Vec2>,
    /// Relative far-field error against the exact pattern (point incidence only).
    pub exact_ff_error: Option<f64>,
    pub outcome: SolveOutcome,
}

pub fn run_solve(cfg: &ExperimentConfig) -> Result<SolveReport, CliError> {
    cfg.validate()?;
    let shape = cfg.shape_kinds()?[0];
    let formulation = cfg.formulation_list()?[0];
    let omega = cfg.medium.omega[0];
    let n = grid_size(cfg, shape, omega);
    let s = setup(cfg, shape, omega, n)?;
    let inc = incident_field(cfg, &s)?;
    let outcome = solve_setup(&s, formulation, &inc, default_tol(cfg, shape), max_iterations(cfg, n))?;
    let dirs = directions(FAR_FIELD_DIRECTIONS);
    let far_field = outcome.far_field(&s, &dirs);
    let exact_ff_error = if cfg.incident.kind == "point" {
        Some(pattern_rel_error(&far_field, &manufactured(cfg, &s)?.far_field(&dirs)))
    } else {
        None
    };
    let record = BenchRecord {
        shape,
        bc: formulation.boundary(),
        formulation,
        omega,
        n,
        iterations: outcome.krylov.iterations,
        converged: outcome.krylov.converged,
        wall_time: outcome.wall_time,
        ff_self_error: None,
    };
    Ok(SolveReport { setup: s, record, far_field, exact_ff_error, outcome })
}

pub fn write_solve(cfg: &ExperimentConfig, rep: &SolveReport, out: &Path) -> Result<(), CliError> {
    bench_table(cfg, std::slice::from_ref(&rep.record)).write(&out.join("solve.csv"))?;
    let mut ff = CsvTable::new(&["angle", "ux_re", "ux_im", "uy_re", "uy_im"]);
    if let Some(e) = rep.exact_ff_error {
        ff.meta("exact_error", fmt_f64(e));
    }
    let dirs = directions(rep.far_field.len());
    for (d, u) in dirs.iter().zip(&rep.far_field) {
        ff.rows.push(vec![
            fmt_f64(d[1].atan2(d[0])),
            fmt_f64(u[0].re),
            fmt_f64(u[0].im),
            fmt_f64(u[1].re),
            fmt_f64(u[1].im),
        ]);
    }
    ff.write(&out.join("farfield.csv"))?;
    let mut hist = CsvTable::new(&["iteration", "residual"]);
    for (i, r) in rep.outcome.krylov.history.iter().enumerate() {
        hist.rows.push(vec![i.to_string(), fmt_f64(*r)]);
    }
    hist.write(&out.join("history.csv"))?;
    helmscatter::io::curve_table(&rep.setup.curve).write(&out.join("curve.csv"))?;
    if cfg.output.dump_operator {
        helmscatter::io::write_matrix_dump(&out.join("operator.bin"), &rep.outcome.system.matrix())?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SpectrumRecord {
    pub formulation: Formulation,
    pub medium: ElasticMedium,
    pub n: usize,
    pub spectrum: SpectrumResult,
}

pub fn run_spectrum(cfg: &ExperimentConfig) -> Result<Vec<SpectrumRecord>, CliError> {
    cfg.validate()?;
    let shape: ShapeKind = cfg.spectrum.shape.parse()?;
    let omega = cfg.spectrum.omega;
    let n = grid_size(cfg, shape, omega);
    let s = setup(cfg, shape, omega, n)?;
    parse_formulations(&cfg.spectrum.formulations)?
        .into_iter()
        .map(|f| {
            let sys = assemble_system(f, &s.medium, &s.curve)?;
            Ok(SpectrumRecord { formulation: f, medium: s.medium, n, spectrum: spectrum(&sys.matrix())? })
        })
        .collect()
}

pub fn write_spectrum(cfg: &ExperimentConfig, recs: &[SpectrumRecord], out: &Path) -> Result<(), CliError> {
    let mut t = CsvTable::new(&["formulation", "index", "re", "im", "abs"]);
    t.meta("shape", &cfg.spectrum.shape);
    t.meta("omega", cfg.spectrum.omega);
    let mut series = Vec::new();
    for r in recs {
        for (i, z) in r.spectrum.eigenvalues.iter().enumerate() {
            t.rows.push(vec![r.formulation.id().into(), i.to_string(), fmt_f64(z.re), fmt_f64(z.im), fmt_f64(z.norm())]);
        }
        series.push(Series {
            label: r.formulation.id().into(),
            points: r.spectrum.eigenvalues.iter().map(|z| (z.re, z.im)).collect(),
        });
    }
    t.write(&out.join("spectrum.csv"))?;
    let title = format!("eigenvalues, {} at omega = {}", cfg.spectrum.shape, cfg.spectrum.omega);
    write_atomic(&out.join("spectrum.svg"), scatter_plot(&title, "Re", "Im", &series).as_bytes())?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub shape: ShapeKind,
    pub formulation: Formulation,
    pub omega: f64,
    pub n: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Far-field distance to the next finer level.
    pub self_error: Option<f64>,
    /// Far-field error against the exact pattern (point incidence).
    pub exact_error: Option<f64>,
    /// Relative displacement error at exterior check points (point incidence).
    pub field_error: Option<f64>,
}

/// Exterior check points: a circle of radius 1.5·max|x| around the origin.
pub fn exterior_points(curve: &Curve, count: usize) -> Vec<[f64; 2]> {
    let r = 1.5 * curve.x.iter().map(|x| x[0].hypot(x[1])).fold(0.0, f64::max);
    (0..count)
        .map(|j| {
            let a = 0.3 + 2.0 * std::f64::consts::PI * j as f64 / count as f64;
            [r * a.cos(), r * a.sin()]
        })
        .collect()
}

/// Relative max-norm displacement error of a solve against the manufactured field.
pub fn field_error(s: &Setup, out: &SolveOutcome, sol: &ManufacturedSolution) -> Result<f64, CliError> {
    let pts = exterior_points(&s.curve, 20);
    let u = ScatteredField::new(&s.medium, &s.curve, &out.representation).displacement(&pts)?;
    let exact: Vec<Vec2> = pts.iter().map(|p| sol.displacement(*p)).collect::<Result<_, _>>()?;
    Ok(pattern_rel_error(&u, &exact))
}

pub fn run_convergence(cfg: &ExperimentConfig) -> Result<Vec<ConvergenceRow>, CliError> {
    cfg.validate()?;
    let omega = cfg.medium.omega[0];
    let dirs = directions(cfg.convergence.directions);
    let mut rows = Vec::new();
    for shape in cfg.shape_kinds()? {
        let n0 = admissible_n(shape, cfg.convergence.n0.unwrap_or_else(|| grid_size(cfg, shape, omega)));
        for f in cfg.formulation_list()? {
            let mut level_rows = Vec::new();
            let mut patterns = Vec::new();
            for lvl in 0..cfg.convergence.levels {
                let n = n0 << lvl;
                let s = setup(cfg, shape, omega, n)?;
                let inc = incident_field(cfg, &s)?;
                let out = solve_setup(&s, f, &inc, default_tol(cfg, shape), max_iterations(cfg, n))?;
                let ff = out.far_field(&s, &dirs);
                let (exact_error, field_err) = if cfg.incident.kind == "point" {
                    let sol = manufactured(cfg, &s)?;
                    (Some(pattern_rel_error(&ff, &sol.far_field(&dirs))), Some(field_error(&s, &out, &sol)?))
                } else {
                    (None, None)
                };
                patterns.push(ff);
                level_rows.push(ConvergenceRow {
                    shape,
                    formulation: f,
                    omega,
                    n,
                    iterations: out.krylov.iterations,
                    converged: out.krylov.converged,
                    self_error: None,
                    exact_error,
                    field_error: field_err,
                });
            }
            for i in 0..level_rows.len() - 1 {
                level_rows[i].self_error = Some(pattern_rel_error(&patterns[i], &patterns[i + 1]));
            }
            rows.extend(level_rows);
        }
    }
    Ok(rows)
}

pub fn write_convergence(rows: &[ConvergenceRow], out: &Path) -> Result<(), CliError> {
    let mut t = CsvTable::new(&[
        "shape",
        "formulation",
        "omega",
        "N",
        "iters",
        "converged",
        "ff_self_error",
        "ff_exact_error",
        "field_error",
    ]);
    for r in rows {
        t.rows.push(vec![
            r.shape.name().into(),
            r.formulation.id().into(),
            fmt_f64(r.omega),
            r.n.to_string(),
            r.iterations.to_string(),
            r.converged.to_string(),
            opt(r.self_error),
            opt(r.exact_error),
            opt(r.field_error),
        ]);
    }
    t.write(&out.join("convergence.csv"))
        .map_err(CliError::from)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdoRow {
    pub shape: ShapeKind,
    pub operator: String,
    pub model: String,
    pub claimed_order: f64,
    pub slope: f64,
}

impl PsdoRow {
    /// Slope at or below the claim, with 0.5 slack.
    pub fn pass(&self) -> bool {
        self.slope <= self.claimed_order + 0.5
    }
}

fn basic(kind: BasicKind, n: usize) -> CMat {
    make_basic(kind).to_matrix(n)
}

/// Scalar BIO expansion checks on one curve.
pub fn psdo_scalar_rows(shape: ShapeKind, k: f64, curve: &Curve, nr: (i64, i64)) -> Result<Vec<PsdoRow>, CliError> {
    let n = curve.n;
    let b: BioSet = assemble_all(c64::new(k, 0.0), curve)?;
    let k2 = c64::new(k * k, 0.0);
    let v_model = &scale(&basic(BasicKind::HD(-1), n), c64::new(0.5, 0.0)) + &scale(&basic(BasicKind::HD(-3), n), -k2 / 4.0);
    let w_model = &scale(&basic(BasicKind::HD(1), n), c64::new(0.5, 0.0)) + &scale(&basic(BasicKind::HD(-1), n), k2 / 4.0);
    let k_model = scale(&row_scale(&curve.kappa, &basic(BasicKind::HD(-3), n)), -k2 / 4.0);
    let row = |op: &str, model: &str, claimed: f64, a: &CMat, m: &CMat| -> Result<PsdoRow, CliError> {
        Ok(PsdoRow {
            shape,
            operator: op.into(),
            model: model.into(),
            claimed_order: claimed,
            slope: multiplier_residual_order(a, m, nr.0, nr.1)?,
        })
    };
    Ok(vec![
        row("V", "1/2 HD-1 - k^2/4 HD-3", -5.0, &b.v, &v_model)?,
        row("W", "1/2 HD1 + k^2/4 HD-1", -3.0, &b.w, &w_model)?,
        row("K", "-1/4 kappa k^2 HD-3", -4.0, &b.k_dl, &k_model)?,
    ])
}

/// CFIER principal-part checks on one curve.
pub fn psdo_cfier_rows(shape: ShapeKind, s: &Setup, nr: (i64, i64)) -> Result<Vec<PsdoRow>, CliError> {
    let n = s.curve.n;
    let d = assemble_system("dirichlet.cfier.rd".parse()?, &s.medium, &s.curve)?;
    let dm = dirichlet_cfier_principal(&s.medium).to_matrix(n);
    let nm = assemble_system("neumann.cfier.rn".parse()?, &s.medium, &s.curve)?;
    let nmod = neumann_cfier_principal(&s.medium, RegularizerKind::RN)?.to_matrix(n);
    Ok(vec![
        PsdoRow {
            shape,
            operator: "dirichlet.cfier.rd".into(),
            model: "A^comb RD principal".into(),
            claimed_order: -1.0,
            slope: block_residual_order(&d.matrix(), &dm, nr.0, nr.1)?,
        },
        PsdoRow {
            shape,
            operator: "neumann.cfier.rn".into(),
            model: "B^comb RN principal".into(),
            claimed_order: -1.0,
            slope: block_residual_order(&nm.matrix(), &nmod, nr.0, nr.1)?,
        },
    ])
}

pub fn run_psdo(cfg: &ExperimentConfig) -> Result<Vec<PsdoRow>, CliError> {
    cfg.validate()?;
    let p = &cfg.psdo;
    let nr = (p.n_min, p.n_max);
    let mut rows = Vec::new();
    for name in &p.shapes {
        let shape: ShapeKind = name.parse()?;
        let s = setup(cfg, shape, p.omega, admissible_n(shape, p.n))?;
        rows.extend(psdo_scalar_rows(shape, p.k, &s.curve, nr)?);
        rows.extend(psdo_cfier_rows(shape, &s, nr)?);
    }
    Ok(rows)
}

pub fn write_psdo(rows: &[PsdoRow], out: &Path) -> Result<(), CliError> {
    let mut t = CsvTable::new(&["shape", "operator", "model", "claimed_order", "fitted_slope", "pass"]);
    for r in rows {
        t.rows.push(vec![
            r.shape.name().into(),
            r.operator.clone(),
            r.model.clone(),
            format!("{}", r.claimed_order),
            format!("{:.6}", r.slope),
            r.pass().to_string(),
        ]);
    }
    t.write(&out.join("psdo.csv")).map_err(CliError::from)
}
