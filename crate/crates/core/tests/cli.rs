use intrinsic_lp::grid::{Grid, GridFunction};
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ilp(args: &[&str], out_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ilp"));
    cmd.args(args).env_remove("ILP_OUT");
    if let Some(dir) = out_env {
        cmd.env("ILP_OUT", dir);
    }
    cmd.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn small_input(dir: &Path, name: &str, f: impl Fn(&[f64]) -> f64) -> String {
    let g = GridFunction::from_fn(Grid::interval(-1.0, 1.0, 33).unwrap(), f).unwrap();
    let p = dir.join(name);
    g.save_csv(&p).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn corpus_export_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let read_all = |d: &Path| {
        let mut names: Vec<_> = fs::read_dir(d).unwrap().map(|e| e.unwrap().path()).collect();
        names.sort();
        names.iter().map(|p| fs::read(p).unwrap()).collect::<Vec<_>>()
    };
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let o = ilp(&["--set", "points=65", "corpus", "--out", d.to_str().unwrap()], None);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(read_all(&a), read_all(&b));
    assert!(a.join("manifest.csv").exists() && a.join("corpus.sha256").exists());
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(code(&ilp(&["norm", "--input", "/nonexistent/f.csv"], None)), 2);
    assert_eq!(code(&ilp(&["--set", "no_such_key=1", "corpus"], None)), 2);
    assert_eq!(code(&ilp(&["--set", "points=abc", "corpus"], None)), 2);
}

#[test]
fn zero_input_gives_zero_operator() {
    let dir = tempfile::tempdir().unwrap();
    let input = small_input(dir.path(), "zero.csv", |_| 0.0);
    for op in ["s_alpha", "g_alpha", "g_star"] {
        let out = dir.path().join(format!("{op}.csv"));
        let o = ilp(&["operator", "--op", op, "--input", &input, "--out", out.to_str().unwrap()], None);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let g = GridFunction::load_csv(&out).unwrap();
        assert_eq!(g.max_abs(), 0.0);
    }
}

#[test]
fn relative_outputs_land_under_out_env() {
    let dir = tempfile::tempdir().unwrap();
    let input = small_input(dir.path(), "tent.csv", |x| (1.0 - 2.0 * x[0].abs()).max(0.0));
    let o = ilp(&["norm", "--space", "bmo", "--input", &input, "--out", "norms.csv"], Some(dir.path()));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("norms.csv")).unwrap();
    assert!(text.lines().last().unwrap().starts_with("TOTAL,"));
}

#[test]
fn verify_writes_report_and_strict_flags_skips() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["--set", "points=33", "--set", "kernel_m=21"];
    let mut args = base.to_vec();
    args.extend(["verify", "--suite", "cor-g"]);
    let o = ilp(&args, Some(dir.path()));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["ratios.csv", "hypotheses.csv", "summary.csv"] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }

    let mut args = base.to_vec();
    args.extend(["--set", "lambda=2", "verify", "--suite", "t2.3", "--strict"]);
    assert_eq!(code(&ilp(&args, Some(dir.path()))), 3);
}

#[test]
fn apcheck_on_unit_weight() {
    let dir = tempfile::tempdir().unwrap();
    let o = ilp(&["--set", "points=65", "apcheck", "--out", "ap.csv"], Some(dir.path()));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("ap.csv")).unwrap();
    assert!(text.starts_with("check,param,fitted_constant,pass"));
    for line in text.lines().skip(1) {
        let c: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!((c - 1.0).abs() < 1e-9, "{line}");
    }
}
