use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn antiratio(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antiratio")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn read_manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn assert_manifest_matches(dir: &Path) {
    let manifest = read_manifest(dir);
    for key in ["tool", "version", "library_version", "command_line", "parameters", "files", "wall_time_seconds"] {
        assert!(manifest.get(key).is_some(), "manifest lacks {key}");
    }
    let files = manifest["files"].as_array().unwrap();
    assert!(!files.is_empty());
    let mut listed: Vec<String> = files.iter().map(|f| f["path"].as_str().unwrap().to_string()).collect();
    for f in files {
        let bytes = fs::read(dir.join(f["path"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"].as_str().unwrap(), hex(&bytes));
        assert_eq!(f["bytes"].as_u64().unwrap() as usize, bytes.len());
    }
    let mut on_disk: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "manifest.json")
        .collect();
    listed.sort();
    on_disk.sort();
    assert_eq!(listed, on_disk);
}

#[test]
fn free_dirac_ratio_at_point_eight() {
    let out = antiratio(&["ratio", "--model", "dirac", "--free", "--beta", "0.8", "--json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["ratio"]["value"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(v["classification"], "particle");
    assert_eq!(v["model"], "dirac");
}

#[test]
fn bound_kg_ratio_at_critical_coupling_is_the_limit() {
    let out = antiratio(&["ratio", "--model", "kg", "--bound", "--zeta", "0.5", "--json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["ratio"]["value"].as_f64().unwrap(), 1.0);
    assert_eq!(v["limit"], true);
    assert!((v["energy"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn bound_ratio_from_nuclear_charge() {
    let by_z = stdout_json(&antiratio(&["ratio", "--model", "dirac", "--bound", "--z", "80", "--json"]));
    let zeta = by_z["zeta"].as_f64().unwrap();
    let by_zeta = stdout_json(&antiratio(&["ratio", "--model", "dirac", "--bound", "--zeta", &zeta.to_string(), "--json"]));
    assert_eq!(by_z["ratio"]["value"], by_zeta["ratio"]["value"]);
}

#[test]
fn quadrature_method_agrees_with_closed_form() {
    let closed = stdout_json(&antiratio(&["ratio", "--model", "kg", "--bound", "--zeta", "0.3", "--json"]));
    let quad = stdout_json(&antiratio(&[
        "ratio", "--model", "kg", "--bound", "--zeta", "0.3", "--method", "quadrature", "--json",
    ]));
    let a = closed["ratio"]["value"].as_f64().unwrap();
    let b = quad["ratio"]["value"].as_f64().unwrap();
    assert!((a - b).abs() < 1e-9, "{a} vs {b}");
}

#[test]
fn out_of_domain_inputs_exit_two() {
    for args in [
        &["ratio", "--model", "kg", "--free", "--beta", "1.0"][..],
        &["ratio", "--model", "dirac", "--free", "--beta", "-0.1"][..],
        &["ratio", "--model", "kg", "--bound", "--zeta", "0.6"][..],
        &["ratio", "--model", "dirac", "--bound", "--zeta", "1.2"][..],
    ] {
        let out = antiratio(args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn text_report_names_the_ratio() {
    let out = antiratio(&["ratio", "--model", "kg", "--free", "--beta", "0.5"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("R"), "{text}");
}

#[test]
fn figures_are_deterministic_and_manifested() {
    for fig in ["fig1", "fig2", "fig3", "fig4"] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        assert_eq!(code(&antiratio(&["figure", fig, "--out-dir", a.path().to_str().unwrap()])), 0);
        assert_eq!(code(&antiratio(&["figure", fig, "--out-dir", b.path().to_str().unwrap()])), 0);
        assert_manifest_matches(a.path());
        let ma = read_manifest(a.path());
        let mb = read_manifest(b.path());
        assert_eq!(ma["files"], mb["files"], "{fig} differs between runs");
    }
}

#[test]
fn profile_panels_have_expected_columns() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&antiratio(&["figure", "fig1", "--out-dir", dir.path().to_str().unwrap()])), 0);
    for label in ["a", "b", "c", "d"] {
        let text = fs::read_to_string(dir.path().join(format!("fig1_{label}.csv"))).unwrap();
        assert_eq!(text.lines().next().unwrap(), "xi,abs_theta_sq,abs_chi_sq,rho");
    }
}

#[test]
fn scan_rejects_sigma_and_writes_csv_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = antiratio(&["figure", "fig2", "--out-dir", dir.path().to_str().unwrap(), "--sigma", "0.001"]);
    assert_eq!(code(&out), 2);

    let out = antiratio(&["scan", "--model", "dirac", "--samples", "10"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 11);
}

#[test]
fn packet_summary_json() {
    let out = antiratio(&["packet", "--model", "kg", "--beta", "0.5", "--json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    for key in ["model", "beta", "sigma", "nodes", "ratio", "closed_form_ratio", "ratio_difference", "fwhm", "peak_rho", "charge"] {
        assert!(v.get(key).is_some(), "packet summary lacks {key}");
    }
    assert!(v["ratio_difference"].as_f64().unwrap() < 1e-3);
}

const SMALL_SCENARIO: &str = "\
# short free packet
model = kg
beta = 0.5
sigma = 0.01
half_width = 64
nodes = 512
potential = none
duration = 1
cadence = 32
";

fn write_scenario(dir: &Path, extra: &str) -> String {
    let path = dir.join("scenario.txt");
    fs::write(&path, format!("{SMALL_SCENARIO}{extra}")).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn evolve_writes_outputs_and_passes() {
    let work = tempfile::tempdir().unwrap();
    let scenario = write_scenario(work.path(), "");
    let out_dir = work.path().join("run");
    let out = antiratio(&["evolve", &scenario, "--out-dir", out_dir.to_str().unwrap(), "--json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    for key in ["max_residual", "l2_residual", "charge_drift", "sampling_interval"] {
        assert!(v["report"].get(key).is_some(), "report lacks {key}");
    }
    assert!(out_dir.join("charge.csv").exists());
    assert!(out_dir.join("continuity.json").exists());
    assert!(out_dir.join("snapshot_0000.csv").exists());
    assert_manifest_matches(&out_dir);
}

#[test]
fn evolve_above_stability_bound_exits_four() {
    let work = tempfile::tempdir().unwrap();
    let scenario = write_scenario(work.path(), "dt = 0.5\n");
    let out_dir = work.path().join("run");
    let out = antiratio(&["evolve", &scenario, "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    assert!(!out_dir.exists());
}

#[test]
fn evolve_tolerance_miss_exits_five() {
    let work = tempfile::tempdir().unwrap();
    let scenario = write_scenario(work.path(), "");
    let out_dir = work.path().join("run");
    let out = antiratio(&["evolve", &scenario, "--out-dir", out_dir.to_str().unwrap(), "--tol", "1e-30"]);
    assert_eq!(code(&out), 5);
    assert!(out_dir.join("continuity.json").exists());
}

#[test]
fn evolve_bad_scenarios() {
    let work = tempfile::tempdir().unwrap();
    let out_dir = work.path().join("run");
    let scenario = write_scenario(work.path(), "colour = blue\n");
    assert_eq!(code(&antiratio(&["evolve", &scenario, "--out-dir", out_dir.to_str().unwrap()])), 2);
    let missing = work.path().join("absent.txt");
    assert_eq!(
        code(&antiratio(&["evolve", missing.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()])),
        3
    );
}
