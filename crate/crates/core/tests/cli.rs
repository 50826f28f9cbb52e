use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use ptsim::io;
use ptsim::linalg::CMatrix;
use ptsim::Tolerances;

fn ptsim() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ptsim"));
    c.env_remove(ptsim::TOLERANCE_ENV);
    c
}

fn run(args: &[&str]) -> Output {
    ptsim().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// A temp dir holding the two-level model at s = 0.1 and its dilation bundle.
fn workspace() -> (TempDir, PathBuf, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let system = dir.path().join("bender.json");
    let bundle = dir.path().join("bundle.json");
    let out = run(&["model", "bender", "--s", "0.1", "--out", path_str(&system)]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["dilate", path_str(&system), "--out", path_str(&bundle)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    (dir, system, bundle)
}

fn gs_system(dir: &Path) -> PathBuf {
    let gs = ptsim::dilation::GuntherSamsonov::new(1.0, 0.5, std::f64::consts::FRAC_PI_3);
    let sys = gs.system();
    let path = dir.join("gs.json");
    io::write_system(
        &path,
        &io::SystemFile { h: sys.h, p: sys.p, t: sys.t_conj, eta: None, bender: None },
    )
    .unwrap();
    path
}

#[test]
fn check_classifies_broken_model() {
    let (_dir, system, _) = workspace();
    let out = run(&["check", path_str(&system)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["class"], "broken");
    assert_eq!(v["pt_symmetric"], true);
}

#[test]
fn canon_reports_one_based_permutation() {
    let (_dir, system, _) = workspace();
    let v = json(&run(&["canon", path_str(&system)]));
    assert_eq!(v["perm"], serde_json::json!([2, 1]));
    assert_eq!(v["epsilons"], serde_json::json!([1, 1]));
}

#[test]
fn dilation_bundle_is_unscaled_for_the_model() {
    let (_dir, _, bundle) = workspace();
    let d = io::read_bundle(&bundle, &Tolerances::default()).unwrap();
    assert_eq!(d.c, 1.0);
    assert!(d.residuals().max() < 1e-12);
}

#[test]
fn weak_value_reads_complex_eigenvalue() {
    let (_dir, _, bundle) = workspace();
    let v = json(&run(&["weak-value", path_str(&bundle), "--pre", "1", "--post", "mu:1"]));
    assert!((v["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["im"].as_f64().unwrap() - (1.0f64 - 0.01).sqrt()).abs() < 1e-12);
    let v = json(&run(&["weak-value", path_str(&bundle), "--pre", "psi:2", "--post", "mu:2"]));
    assert!((v["im"].as_f64().unwrap() + (1.0f64 - 0.01).sqrt()).abs() < 1e-12);
}

#[test]
fn orthogonal_selection_is_a_domain_error() {
    let (_dir, _, bundle) = workspace();
    let out = run(&["weak-value", path_str(&bundle), "--pre", "psi:1", "--post", "mu:2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "VanishingOverlap");
}

#[test]
fn bad_state_tokens() {
    let (_dir, _, bundle) = workspace();
    let out = run(&["weak-value", path_str(&bundle), "--pre", "psi:3", "--post", "mu:1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "IndexOutOfRange");
    let out = run(&["weak-value", path_str(&bundle), "--pre", "psi:0", "--post", "mu:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn state_vector_files_are_accepted() {
    let (dir, _, bundle) = workspace();
    let d = io::read_bundle(&bundle, &Tolerances::default()).unwrap();
    let pre = dir.path().join("pre.json");
    io::write_vector(&pre, &d.psi_tilde.column(0)).unwrap();
    let v = json(&run(&["weak-value", path_str(&bundle), "--pre", path_str(&pre), "--post", "mu:1"]));
    assert!((v["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn tampered_bundle_is_rejected() {
    let (_dir, _, bundle) = workspace();
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&bundle).unwrap()).unwrap();
    v["h_tilde"]["data"][0][0][0] = Value::from(v["h_tilde"]["data"][0][0][0].as_f64().unwrap() + 0.01);
    std::fs::write(&bundle, v.to_string()).unwrap();
    let out = run(&["weak-value", path_str(&bundle), "--pre", "1", "--post", "mu:1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "VerificationFailure");
}

#[test]
fn bundle_round_trip_is_bit_exact() {
    let (dir, _, bundle) = workspace();
    let d = io::read_bundle(&bundle, &Tolerances::default()).unwrap();
    let again = dir.path().join("again.json");
    io::write_bundle(&again, &d).unwrap();
    let e = io::read_bundle(&again, &Tolerances::default()).unwrap();
    assert_eq!(d, e);
    assert_eq!(std::fs::read(&bundle).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn missing_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let h = io::matrix_to_json(&CMatrix::identity(2));
    std::fs::write(&path, serde_json::json!({ "H": h, "T": h }).to_string()).unwrap();
    let out = run(&["check", path_str(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`P`"));
}

#[test]
fn malformed_json_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(run(&["check", path_str(&path)]).status.code(), Some(2));
    assert_eq!(run(&["check", "/nonexistent/system.json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn tolerance_from_environment_is_honored() {
    let (_dir, system, _) = workspace();
    let strict = ptsim()
        .env(ptsim::TOLERANCE_ENV, "1e-30")
        .args(["dilate", path_str(&system)])
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(1));
    let overridden = ptsim()
        .env(ptsim::TOLERANCE_ENV, "1e-30")
        .args(["--tol", "1e-8", "dilate", path_str(&system)])
        .output()
        .unwrap();
    assert_eq!(overridden.status.code(), Some(0));
}

#[test]
fn pointer_from_bundle() {
    let (_dir, _, bundle) = workspace();
    let out = run(&["pointer", "--bundle", path_str(&bundle), "--pre", "1", "--post", "mu:1", "--g", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["l2_distance"].as_f64().unwrap() < 1e-3);
    assert!((v["mean_shift_weak"].as_f64().unwrap() - 0.01).abs() < 1e-12);
    assert!((v["mean_shift_exact"].as_f64().unwrap() - 0.01).abs() < 1e-4);
}

#[test]
fn pointer_from_setup_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("setup.json");
    let sz = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
    let v = vec![ptsim::linalg::ONE * 0.5f64.sqrt(); 2];
    let setup = ptsim::weak::WeakSetup::new(sz, v.clone(), v, 0.2, 1.0, &Tolerances::default()).unwrap();
    io::write_setup(&path, &setup).unwrap();
    let out = run(&["pointer", path_str(&path), "--grid", "1024"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["grid"]["points"], 1024);
}

#[test]
fn zgrid_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("z.csv");
    let out = run(&["zgrid", "--steps", "2", "--out", path_str(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rows"], 4);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text.lines().next(), Some("t,s,z11,z22,z12,z21"));
}

#[test]
fn zgrid_reruns_are_byte_identical() {
    let a = run(&["zgrid", "--steps", "7"]);
    let b = run(&["zgrid", "--steps", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn zgrid_outside_broken_regime_fails() {
    let out = run(&["zgrid", "--s-max", "1.5", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "RegimeViolation");
}

#[test]
fn zconv_reports_monotone_decrease() {
    let v = json(&run(&["zconv"]));
    assert_eq!(v["z11_decreasing"], true);
    assert_eq!(v["z12_decreasing"], true);
    assert_eq!(v["samples"].as_array().unwrap().len(), 4);
}

#[test]
fn embedding_of_unbroken_and_broken_systems() {
    let (dir, system, _) = workspace();
    let gs = gs_system(dir.path());
    let out = run(&["embed-unbroken", path_str(&gs)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
    let out = run(&["dilate", path_str(&gs), "--mode", "embed"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["embed-unbroken", path_str(&system)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "BrokenSymmetry");
    let out = run(&["embed-unbroken", "--gs", "0,1,0.2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn dilate_with_explicit_xi_and_scale() {
    let (dir, system, _) = workspace();
    let xi = dir.path().join("xi.json");
    io::write_matrix(&xi, &CMatrix::from_real_rows(&[&[2.0, 0.5], &[0.0, 1.0]])).unwrap();
    let out = run(&["dilate", path_str(&system), "--xi", path_str(&xi), "--scale", "0.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["c"], 0.5);
    let out = run(&["dilate", path_str(&system), "--scale", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest", "--seed", "3", "--count", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
}
