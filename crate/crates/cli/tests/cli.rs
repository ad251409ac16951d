use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdiff-dbi")).args(args).arg("--out").arg(out).output().expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn solve_writes_profile_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["solve", "--sector", "baby", "--potential", "old:1", "--grid", "200"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    assert!(csv.starts_with("coordinate,field,derivative,energy_density,charge_density\n"));
    let s = json(&dir.path().join("summary.json"));
    let e = s["energy"]["energy_quadrature"].as_f64().unwrap();
    assert!((e - 0.759129941665).abs() < 1e-9, "{e}");
    let r = s["compacton_radius"].as_f64().unwrap();
    assert!((r - 0.1949242003).abs() < 1e-9, "{r}");
    assert_eq!(s["seed"], 0);
}

#[test]
fn no_soliton_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = run(&["solve", "--mu", "0"], &out);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
}

#[test]
fn bad_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["solve", "--beta", "-1"][..],
        &["solve", "--sector", "torus"],
        &["solve", "--potential", "standard"],
        &["solve", "--alpha-k", "0.25"],
        &["solve", "--unknown-flag"],
        &["sweep", "--values", "0.01"],
        &["sweep", "--values", "0.01,zero,1"],
        &["bound", "--order", "9"],
        &["bound", "--beta", "2", "--compare-pavlovskii"],
    ] {
        let o = run(args, &dir.path().join("x"));
        assert_eq!(code(&o), 1, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!dir.path().join("x").exists(), "{args:?} left output behind");
    }
}

#[test]
fn verify_passes_and_detects_perturbation() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify"], &dir.path().join("ok"));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&dir.path().join("ok/verify.json"))["passed"], true);

    let o = run(&["verify", "--inject-perturbation"], &dir.path().join("bad"));
    assert_eq!(code(&o), 3);
    let report = json(&dir.path().join("bad/verify.json"));
    assert_eq!(report["passed"], false);
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["eom_richardson_ratio"]);
}

#[test]
fn bound_certificate_fields() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bound", "--order", "3", "--samples", "10000", "--compare-pavlovskii"], dir.path());
    assert_eq!(code(&o), 0);
    let c = json(&dir.path().join("certificate.json"));
    assert!((c["constant"].as_f64().unwrap() - 3.5).abs() < 1e-12);
    assert!((c["alpha"].as_f64().unwrap() - 9.0 / 14.0).abs() < 1e-9);
    assert!(c["min_slack"].as_f64().unwrap() >= 0.0);
    let rel = c["reference_comparison_c_3_5"]["relative_error"].as_f64().unwrap();
    assert!((rel - 0.2116738).abs() < 1e-6, "{rel}");
}

#[test]
fn sweeps_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sweep", "--axis", "mu", "--values", "1e-2,1e-3,1e-4"], dir.path());
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert_eq!(csv.lines().next(), Some("parameter,energy,distance_to_limit"));
    let s = json(&dir.path().join("sweep.json"));
    assert!((s["fit"].as_f64().unwrap() / (2.0 / 3.0) - 1.0).abs() < 0.01);

    let o = run(&["sweep", "--sector", "skyrme", "--axis", "mu", "--values", "1,2,3"], &dir.path().join("s"));
    assert_eq!(code(&o), 1);
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# classify a power-law tail\nsector = baby\npotential = old:3\nbeta = 2\n").unwrap();
    let o = run(&["classify", "--config", cfg.to_str().unwrap(), "--beta", "1.5"], &dir.path().join("c"));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let c = json(&dir.path().join("c/classify.json"));
    assert_eq!(c["predicted"], "PowerLaw");
    assert_eq!(c["agree"], true);
    assert_eq!(c["beta"].as_f64(), Some(1.5));

    fs::write(&cfg, "beta = 1\nbeta = 2\n").unwrap();
    let o = run(&["solve", "--config", cfg.to_str().unwrap()], &dir.path().join("d"));
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn rerun_replaces_files_atomically() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["solve", "--grid", "50"], dir.path())), 0);
    let first = fs::read(dir.path().join("profile.csv")).unwrap();
    assert_eq!(code(&run(&["solve", "--grid", "80"], dir.path())), 0);
    let second = fs::read(dir.path().join("profile.csv")).unwrap();
    assert_ne!(first, second);
    // a failing run leaves the previous outputs untouched
    assert_eq!(code(&run(&["solve", "--mu", "0"], dir.path())), 2);
    assert_eq!(fs::read(dir.path().join("profile.csv")).unwrap(), second);
    let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|d| d.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2, "stray files: {names:?}");
}
