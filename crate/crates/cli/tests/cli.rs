use helmscatter_cli::config::ExperimentConfig;
use std::path::Path;
use std::process::{Command, Output};

fn helmscatter(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_helmscatter"));
    cmd.args(args).env_remove("HELMSCATTER_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL: &str = "shapes = [\"kite\"]\nformulations = [\"dirichlet.cfier.rd\", \"neumann.cfie\"]\n\
                     [medium]\nomega = [5.0]\n[resolution]\nn = 64\n";

#[test]
fn sample_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut count = 0;
    for e in std::fs::read_dir(&dir).unwrap() {
        let p = e.unwrap().path();
        ExperimentConfig::load(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        count += 1;
    }
    assert!(count >= 5);
    let d = ExperimentConfig::load(&dir.join("default.toml")).unwrap();
    let e = ExperimentConfig::from_toml("").unwrap();
    assert_eq!(format!("{d:?}"), format!("{e:?}"));
}

#[test]
fn bad_config_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown.toml", "shapez = [\"kite\"]", "shapez"),
        ("shape.toml", "shapes = [\"blob\"]", "blob"),
        ("form.toml", "formulations = [\"dirichlet.cfier.xx\"]", "dirichlet.cfier.xx"),
        ("bc.toml", "bc = [\"neumann\"]\nformulations = [\"dirichlet.cfie\"]", "neumann.cfier.rn"),
        ("tol.toml", "[solver]\ntol = 2.0", "solver.tol"),
    ];
    for (name, text, needle) in cases {
        let cfg = write(dir.path(), name, text);
        let o = helmscatter(&["--config", &cfg, "--out", dir.path().to_str().unwrap(), "solve"], &[]);
        assert_eq!(o.status.code(), Some(2), "{name}: {}", stderr(&o));
        assert!(stderr(&o).contains(needle), "{name}: {}", stderr(&o));
    }
    let missing = dir.path().join("nope.toml");
    let o = helmscatter(&["--config", missing.to_str().unwrap(), "solve"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", &format!("{SMALL}[output]\ndump_operator = true\n"));
    let out = dir.path().join("out");
    let o = helmscatter(&["--config", &cfg, "--out", out.to_str().unwrap(), "solve"], &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["solve.csv", "farfield.csv", "history.csv", "curve.csv", "operator.bin"] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let solve = std::fs::read_to_string(out.join("solve.csv")).unwrap();
    assert!(solve.lines().any(|l| l.starts_with("kite,dirichlet,dirichlet.cfier.rd,")), "{solve}");
}

#[test]
fn bench_iters_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", SMALL);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let o = helmscatter(&["--config", &cfg, "--out", a.to_str().unwrap(), "--threads", "1", "bench-iters"], &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = helmscatter(
        &["--config", &cfg, "--out", b.to_str().unwrap(), "bench-iters"],
        &[("HELMSCATTER_THREADS", "2")],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read(a.join("bench.csv")).unwrap();
    assert_eq!(csv, std::fs::read(b.join("bench.csv")).unwrap());
    assert_eq!(std::fs::read(a.join("bench.svg")).unwrap(), std::fs::read(b.join("bench.svg")).unwrap());
    // wall times stay out of the main table
    assert!(!String::from_utf8(csv).unwrap().contains("wall"));
}

#[test]
fn verify_psdo_and_spectrum_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "[psdo]\nshapes = [\"circle\"]\nn = 128\nn_max = 32\n\
         [spectrum]\nshape = \"circle\"\nomega = 5.0\nformulations = [\"neumann.cfier.rn\"]\n\
         [resolution]\nn = 48\n",
    );
    let out = dir.path().join("out");
    for sub in ["verify-psdo", "spectrum"] {
        let o = helmscatter(&["--config", &cfg, "--out", out.to_str().unwrap(), sub], &[]);
        assert!(o.status.success(), "{sub}: {}", stderr(&o));
    }
    let psdo = std::fs::read_to_string(out.join("psdo.csv")).unwrap();
    assert!(psdo.contains("shape,operator,model,claimed_order,fitted_slope,pass"));
    assert!(std::fs::read_to_string(out.join("spectrum.csv")).unwrap().lines().count() > 96);
}
