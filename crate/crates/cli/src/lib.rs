//! Experiment runner for `helmscatter`: TOML configs, sweeps, CSV and SVG output.

pub mod config;
pub mod experiments;
pub mod svg;

use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] helmscatter::Error),
}

/// The five subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    BenchIters { large: bool },
    Spectrum,
    Convergence,
    VerifyPsdo,
}

/// Run one subcommand and write its artifacts into `out`.
pub fn run(cmd: Command, cfg: &config::ExperimentConfig, out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Core(e.into()))?;
    match cmd {
        Command::Solve => {
            let rep = experiments::run_solve(cfg)?;
            experiments::write_solve(cfg, &rep, out)
        }
        Command::BenchIters { large } => {
            let recs = experiments::bench_iters(cfg, large)?;
            experiments::write_bench(cfg, &recs, out)
        }
        Command::Spectrum => {
            let recs = experiments::run_spectrum(cfg)?;
            experiments::write_spectrum(cfg, &recs, out)
        }
        Command::Convergence => {
            let rows = experiments::run_convergence(cfg)?;
            experiments::write_convergence(&rows, out)
        }
        Command::VerifyPsdo => {
            let rows = experiments::run_psdo(cfg)?;
            experiments::write_psdo(&rows, out)
        }
    }
}
