//! CLI surface tests: exit codes, output routing, manifests, and input
//! formats beyond the determinism checks in the acceptance suite.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_intersieve"))
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "intersieve-cli-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn exit_codes() {
    // Usage errors exit 1.
    let out = bin().arg("no-such-command").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .args(["classify", "--poly", "2y"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "juxtaposition must be a usage error");

    // Refuted outcomes exit 2 only under --assert.
    let plain = bin()
        .args(["classify", "--poly", "(x+y)^2", "--d-bound", "4", "--prime-bound", "10"])
        .output()
        .unwrap();
    assert_eq!(plain.status.code(), Some(0));
    let asserted = bin()
        .args([
            "classify", "--poly", "(x+y)^2", "--d-bound", "4", "--prime-bound", "10", "--assert",
        ])
        .output()
        .unwrap();
    assert_eq!(asserted.status.code(), Some(2));

    // Budget exhaustion exits 3.
    let out = bin()
        .args([
            "expsum", "complete", "--poly", "x^2+y^2+z^2", "--p", "5", "--max-points", "10",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // A refused sumset upper bound is a usage-level error.
    let out = bin()
        .args(["diffset", "bounds", "--X", "3,5", "--N", "10", "--Y", "1,4,9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_file_and_manifest() {
    let dir = tempdir();
    let out_path = dir.join("result.json");
    let manifest_path = dir.join("manifest.json");
    let out = bin()
        .args([
            "diffset",
            "exact",
            "--X",
            "1,4,9",
            "--N",
            "10",
            "--out",
            out_path.to_str().unwrap(),
            "--manifest",
            manifest_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty(), "output should go to the file");
    let result: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(result["exact"], 4);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    for key in [
        "argv",
        "budgets",
        "input_digest_sha256",
        "library_version",
        "seed",
        "wall_time_ms",
    ] {
        assert!(manifest.get(key).is_some(), "manifest missing {key}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn forbidden_set_file_format() {
    let dir = tempdir();
    let path = dir.join("forbidden.txt");
    std::fs::write(&path, "1\n4\n\n9\n").unwrap();
    let out = bin()
        .args(["diffset", "exact", "--x-file", path.to_str().unwrap(), "--N", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exact"], 4);

    std::fs::write(&path, "1\nnot-a-number\n").unwrap();
    let out = bin()
        .args(["diffset", "exact", "--x-file", path.to_str().unwrap(), "--N", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn weyl_arc_classification() {
    let near = bin()
        .args([
            "expsum", "weyl", "--poly", "x^2+y^2", "--alpha", "0.333333334", "--m", "6", "--y",
            "1", "--q-bound", "50",
        ])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&near.stdout).unwrap();
    assert_eq!(v["arc"]["a"], 1);
    assert_eq!(v["arc"]["q"], 3);
    assert_eq!(v["arc"]["arc"]["kind"], "Major");

    // A frequency far from every small-denominator rational is minor.
    let far = bin()
        .args([
            "expsum", "weyl", "--poly", "x^2+y^2", "--alpha", "0.41421356237", "--m", "6",
            "--y", "1", "--q-bound", "50",
        ])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&far.stdout).unwrap();
    assert_eq!(v["arc"]["arc"]["kind"], "Minor");
}

#[test]
fn paper_schedule_reporting() {
    let out = bin()
        .args([
            "expsum",
            "weyl",
            "--poly",
            "x^2+y^2",
            "--alpha",
            "1/3",
            "--m",
            "6",
            "--paper-schedule",
            "0.2",
            "--n-ambient",
            "100000",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // Q = eta^-2 = 25, Y = eta^-4 = 625, gamma = Y / N.
    assert_eq!(v["schedule"]["Q"], 25.0);
    assert_eq!(v["schedule"]["Y"], 625.0);
    // Y was not given explicitly, so the sieve cutoff comes from the schedule.
    assert_eq!(v["report"]["param_Y"], "625");
}

#[test]
fn csv_edge_cases() {
    // Empty grid: header-only CSV.
    let out = bin()
        .args([
            "diffset", "scaling", "--poly", "x^2", "--grid", "", "--solver", "greedy",
            "--format", "csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "N,D,method");

    // Unsorted grid comes back sorted ascending by N.
    let out = bin()
        .args([
            "diffset", "scaling", "--poly", "x^2", "--grid", "30,10,20", "--solver", "greedy",
            "--format", "csv",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    let ns: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(ns, vec!["10", "20", "30"]);
}
