use clap::{Parser, Subcommand};
use helmscatter_cli::config::ExperimentConfig;
use helmscatter_cli::{run, Command};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "helmscatter", version, about = "Elastic scattering by Helmholtz-decomposition boundary integral equations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// TOML experiment config; defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (falls back to HELMSCATTER_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// One solve with far-field output.
    Solve,
    /// GMRES iteration counts over shapes, formulations and frequencies.
    BenchIters {
        /// Include `medium.large_omega`.
        #[arg(long)]
        large: bool,
    },
    /// Eigenvalues of the system operators.
    Spectrum,
    /// Far-field self-convergence over doubling N.
    Convergence,
    /// Fitted residual orders of the operator expansions.
    VerifyPsdo,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("HELMSCATTER_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: could not configure {t} threads: {e}");
        }
    }
    let cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p),
        None => ExperimentConfig::from_toml(""),
    };
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let out = cli
        .out
        .or_else(|| cfg.output.dir.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let cmd = match cli.cmd {
        Cmd::Solve => Command::Solve,
        Cmd::BenchIters { large } => Command::BenchIters { large },
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Convergence => Command::Convergence,
        Cmd::VerifyPsdo => Command::VerifyPsdo,
    };
    match run(cmd, &cfg, &out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
