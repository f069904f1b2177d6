//! End-to-end runs of the `kfold` binary: exit codes, error pointers and
//! reproducibility of written files.

use std::path::Path;
use std::process::{Command, Output};

fn kfold(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kfold")).args(args).current_dir(dir).output().expect("spawn kfold")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn unknown_config_key_exits_2_with_pointer() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.json", r#"{"version": 1, "seed": 1, "analysis": {"unfold_degre": 5}}"#);
    let o = kfold(&["sample", "--config", &cfg], tmp.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("/analysis/unfold_degre"), "{}", stderr(&o));
}

#[test]
fn semantic_config_error_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "c.json",
        r#"{"version": 1, "seed": 1, "samples": 4, "ensemble": {"kind": "gue", "n": 8, "scale": 1.0},
            "analysis": {"window": [0.9, 0.1]}}"#,
    );
    let o = kfold(&["analyze", "--config", &cfg], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/analysis/window"), "{}", stderr(&o));
}

#[test]
fn wrong_version_and_missing_seed_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "v.json", r#"{"version": 7, "seed": 1}"#);
    let o = kfold(&["verify", "--config", &cfg], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/version"));

    let o = kfold(&["sample"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/seed"));
}

#[test]
fn size_caps_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let o = kfold(&["tables", "--k", "6", "--out", "t"], tmp.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let cfg = write(
        tmp.path(),
        "big.json",
        r#"{"version": 1, "seed": 1, "samples": 1, "ensemble": {"kind": "gue", "n": 100000, "scale": 1.0}}"#,
    );
    let o = kfold(&["sample", "--config", &cfg, "--out", "s"], tmp.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn invalid_arguments_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let o = kfold(&["tables", "--k", "0"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    let o = kfold(&["no-such-command"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tables_report_lists_discrepancies() {
    let tmp = tempfile::tempdir().unwrap();
    let o = kfold(&["tables", "--out", "t"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(tmp.path().join("t/discrepancies.csv")).unwrap();
    assert!(csv.lines().any(|l| l == "c_coefficients,\"C_(2,2)(2)\",2,1"), "{csv}");
    for f in ["tables_k4_d4.json", "characters_s4.csv", "branching_s4.csv", "kronecker_s2.csv"] {
        assert!(tmp.path().join("t").join(f).exists(), "{f}");
    }
}

#[test]
fn sample_then_analyze_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "g.json",
        r#"{"version": 1, "seed": 42, "samples": 12, "ensemble": {"kind": "gue", "n": 24, "scale": 1.0},
            "analysis": {"unfold_degree": 5}}"#,
    );
    for out in ["a", "b"] {
        let o = kfold(&["sample", "--config", &cfg, "--out", out], tmp.path());
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let a = std::fs::read(tmp.path().join("a/batch.json")).unwrap();
    assert_eq!(a, std::fs::read(tmp.path().join("b/batch.json")).unwrap());

    // Analysing the stored batch matches analysing a fresh draw.
    let batch = tmp.path().join("a/batch.json").to_string_lossy().into_owned();
    let o = kfold(&["analyze", "--config", &cfg, "--batch", &batch, "--out", "from_file"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let o = kfold(&["analyze", "--config", &cfg, "--out", "fresh", "--format", "json"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        std::fs::read(tmp.path().join("from_file/analysis.json")).unwrap(),
        std::fs::read(tmp.path().join("fresh/analysis.json")).unwrap()
    );
    assert!(tmp.path().join("from_file/ratio_hist.svg").exists());
    assert!(!tmp.path().join("fresh/ratio_hist.svg").exists());
}

#[test]
fn corrupted_precision_fails_verify_with_exit_1() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "neg.json",
        r#"{"version": 1, "seed": 5,
            "verify": {"kfold_precision": {"rank_one_defect": {"strength": 0.97, "seed": 3}}}}"#,
    );
    let o = kfold(&["verify", "--config", &cfg, "--out", "v"], tmp.path());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("v/verify.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    let checks = report["checks"].as_array().unwrap();
    let kfold = checks.iter().find(|c| c["name"] == "kfold_invariance").unwrap();
    assert_eq!(kfold["passed"], false);
    assert!(kfold["details"]["test"]["ratio"].as_f64().unwrap() > 3.0);
    // The remaining checks are unaffected by the corrupted Δ.
    assert!(checks.iter().filter(|c| c["name"] != "kfold_invariance").all(|c| c["passed"] == true));
}

#[test]
fn hciz_closed_form_from_the_command_line() {
    let tmp = tempfile::tempdir().unwrap();
    let o = kfold(&["hciz", "--a", "0,1", "--b", "0,1", "--out", "h", "--format", "json"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("h/hciz.json")).unwrap()).unwrap();
    let value = report["exact"]["value"].as_f64().unwrap();
    assert!((value - (std::f64::consts::E - 1.0)).abs() < 1e-10);
}

#[test]
fn audit_writes_per_subset_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let o = kfold(&["audit", "--d", "2,3", "--out", "a"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(tmp.path().join("a/audit_k2.csv")).unwrap();
    assert!(csv.starts_with("d,subset,complex_dim,hermitian_dim"), "{csv}");
    assert!(csv.lines().filter(|l| l.starts_with("3,")).count() >= 5);
}
