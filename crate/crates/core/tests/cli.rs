use std::fs;
use std::process::{Command, Output};

fn qextend(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qextend"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn body_rows(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .skip_while(|l| l.starts_with("schema=") || l.starts_with('#'))
        .skip(1)
        .take_while(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

#[test]
fn kloosterman_q5_has_every_pair() {
    let out = qextend(&["sums", "--q", "5", "--kind", "kloosterman"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = body_rows(&out);
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r.ends_with(",pass")));
    // (0,0) is the trivial sum q - 1 with no claimed bound
    assert!(rows[0].starts_with("5,kloosterman,0,0,4.0000000000000000e0,"));
}

#[test]
fn gauss_q7_has_one_row_per_coefficient() {
    let out = qextend(&["sums", "--q", "7", "--kind", "gauss"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(body_rows(&out).len(), 6);
}

#[test]
fn rejected_configs_exit_2() {
    for args in [
        &["sums", "--q", "9"][..],
        &["sums", "--q", "2"],
        &["sums", "--q", ""],
        &["surface-ft", "--threshold", "bogus=3"],
        &["surface-ft", "--forms", "diag:1,x"],
        &["sums", "--nope"],
    ] {
        let out = qextend(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn zero_level_yields_error_rows() {
    let out = qextend(&["surface-ft", "--q", "5", "--d", "2", "--forms", "diag:1,1", "--j", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let rows = body_rows(&out);
    assert_eq!(rows.len(), 1);
    assert!(rows[0].contains("error:ZeroLevel"), "{}", rows[0]);
}

#[test]
fn config_file_and_flags_merge() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    fs::write(&cfg, "q = [3, 5]\nd = [2]\nforms = [\"diag:1,1\"]\nj = \"1\"\nseed = 3\n").unwrap();
    let out_path = dir.path().join("nested/ft.json");
    let out = qextend(&[
        "surface-ft",
        "--config",
        cfg.to_str().unwrap(),
        "--q",
        "7",
        "--format",
        "json",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["config"]["q"], serde_json::json!([7]));
    assert_eq!(v["config"]["seed"], 3);
    assert!(!v["rows"].as_array().unwrap().is_empty());
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "q = [3]\ncolour = \"red\"\n").unwrap();
    let out = qextend(&["sums", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exponents_flags_degenerate_formula() {
    let out = qextend(&["exponents", "--d", "2", "--p0", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("flagged:"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("# region ")));
}

#[test]
fn thresholds_can_force_failures() {
    let out = qextend(&["sums", "--q", "11", "--kind", "salie", "--threshold", "weil=0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains(",FAIL"));
}
