use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_anderson-levels"))
}

#[test]
fn success_writes_outputs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "experiment = \"free-measure\"\n[model]\nd = 3\nL = 4\nE = 5\nK = 4\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let status = bin()
        .arg("--config")
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&out)
        .arg("--threads")
        .arg("1")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(out.join("free-measure.csv").exists());
    assert!(out.join("manifest.json").exists());
}

#[test]
fn invalid_config_exits_2_and_lists_every_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(
        &cfg,
        "experiment = \"compare\"\n[model]\nd = 3\nL = [2]\nE = 7\nbogus = 1\n",
    )
    .unwrap();
    let out = bin().arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for needle in [
        "model.E",
        "model.bogus",
        "profile: required",
        "law: required",
        "test_function: required",
    ] {
        assert!(err.contains(needle), "missing `{needle}` in\n{err}");
    }
}

#[test]
fn failed_rows_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    // L = 8 in d = 3 is above the dense eigensolve cap; L = 2 still runs.
    fs::write(
        &cfg,
        "experiment = \"compare\"\n[model]\nd = 3\nL = [2, 8]\nE = 0.5\n\
         [profile]\nkind = \"decaying\"\namplitude = 1\nepsilon = 0.5\n\
         [law]\nkind = \"uniform01\"\n[test_function]\nkind = \"bump\"\nhalf_width = 1\n",
    )
    .unwrap();
    let out = bin()
        .arg("--config")
        .arg(&cfg)
        .arg("--out-dir")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let csv = fs::read_to_string(dir.path().join("o/compare.csv")).unwrap();
    assert!(csv.lines().any(|l| l.ends_with(",ok")));
    assert!(csv.lines().any(|l| l.contains(",error: ")));
}

#[test]
fn missing_config_file_exits_2() {
    let out = bin().arg("--config").arg("/nonexistent/run.toml").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
