use std::process::{Command, Output};

use serde_json::Value;

fn hmoments(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmoments"))
        .args(args)
        .output()
        .expect("failed to launch hmoments")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn imn_table() {
    let out = hmoments(&["imn", "--m-max", "3", "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][1..], ["1", "1", "1"]);
    let column3: Vec<&str> = rows.iter().map(|r| r[3]).collect();
    assert_eq!(column3, ["1", "3", "5", "7"]);
}

#[test]
fn imn_csv_and_json() {
    let out = hmoments(&["imn", "--m-max", "2", "--n-max", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("8/3"));
    let out = hmoments(&["imn", "--m-max", "2", "--n-max", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let _: Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
}

#[test]
fn moment_values() {
    for (r, expected) in [(vec!["4", "2", "0"], "1/5"), (vec!["2", "2", "2"], "1/15"), (vec!["6", "0", "0"], "1")] {
        let mut args = vec!["moment"];
        args.extend(r);
        let out = hmoments(&args);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out).trim(), expected);
    }
    let out = hmoments(&["moment", "3", "1"]);
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn odd_total_degree_is_usage_error() {
    let out = hmoments(&["moment", "1", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn verify_suites_pass() {
    for target in ["sphere", "orbit", "hyperg"] {
        let out = hmoments(&["verify", target, "--samples", "100000", "--directions", "3"]);
        assert_eq!(out.status.code(), Some(0), "{target}: {}", String::from_utf8_lossy(&out.stderr));
        let report: Value = serde_json::from_slice(&out.stdout).expect("valid JSON report");
        let checks = report.as_array().expect("report is a list");
        assert!(!checks.is_empty());
        for check in checks {
            assert_eq!(check["pass"], Value::Bool(true), "{check}");
        }
    }
}

fn vortex_csv(args: &[&str]) -> Vec<Vec<String>> {
    let mut full = vec!["vortex", "--format", "csv"];
    full.extend_from_slice(args);
    let out = hmoments(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "N,R2,mu2,T,hbar,Z_series,Z_closed,rel_diff,terms_used"
    );
    lines.map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn vortex_rows() {
    let rows = vortex_csv(&["--n", "1", "--r2", "2", "--mu2", "0"]);
    assert_eq!(rows.len(), 1);
    let z: f64 = rows[0][5].parse().unwrap();
    // Free gas: Z = T/(2ħ²) · Ã with Ã = 4π(R² − N).
    assert!((z - 0.5 * 4.0 * std::f64::consts::PI).abs() < 1e-12, "{z}");
    assert_eq!(rows[0][5], rows[0][6]);

    let rows = vortex_csv(&["--n", "2", "--r2", "3", "--coupling", "0.1,1,5"]);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert_eq!(row[0], "2");
        let rel_diff: f64 = row[7].parse().unwrap();
        assert!(rel_diff <= 1e-8, "{row:?}");
    }
}

#[test]
fn vortex_radius_condition() {
    for args in [["--n", "1", "--r2", "1"], ["--n", "1,2", "--r2", "2"]] {
        let mut full = vec!["vortex"];
        full.extend_from_slice(&args);
        let out = hmoments(&full);
        assert_eq!(out.status.code(), Some(1));
        assert!(String::from_utf8_lossy(&out.stderr).contains("radius condition"));
    }
}

#[test]
fn unknown_flag_exits_64() {
    let out = hmoments(&["imn", "--bogus"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn help_lists_common_flags() {
    let out = hmoments(&["verify", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for flag in ["--seed", "--samples", "--tol", "--format", "--out"] {
        assert!(text.contains(flag), "missing {flag}");
    }
}

#[test]
fn runs_are_reproducible() {
    let args = ["verify", "sphere", "--samples", "50000", "--directions", "2", "--seed", "7"];
    let a = hmoments(&args);
    let b = hmoments(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("hmoments-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("moment.txt");
    let out = hmoments(&["moment", "2", "2", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap().trim(), "1/15");
    std::fs::remove_dir_all(&dir).unwrap();
}
