//! End-to-end checks of the batch driver: output shapes, exit codes, config
//! handling, and JSON report determinism.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nahmforge"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("spawn nahmforge");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn eval_builtin_partition_product() {
    let (code, stdout, _) = run(&["eval", "--builtin", "capparelli", "--order", "13"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout.trim(),
        "1 + q^2 + q^3 + q^4 + q^5 + 2*q^6 + q^7 + 2*q^8 + 3*q^9 + 3*q^10 + 3*q^11 + \
         5*q^12 + 4*q^13 + O(q^(14))"
    );
}

#[test]
fn eval_indexed_builtin_has_half_integer_exponents() {
    let (code, stdout, _) = run(&["eval", "--builtin", "T1.2:r=2:j=1", "--order", "4"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("q^(1/2)"), "{stdout}");
    assert!(stdout.starts_with("1 + "), "{stdout}");
}

#[test]
fn eval_spec_file_at_order_zero_prints_one() {
    let dir = std::env::temp_dir().join("nahmforge-cli-test-eval");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("unit.json");
    std::fs::write(
        &path,
        r#"{"r":1,"A":[["2"]],"b":["0"],"c":"0","d":[1],"sign_coord":null}"#,
    )
    .unwrap();
    let (code, stdout, _) = run(&["eval", "--spec", path.to_str().unwrap(), "--order", "0"]);
    assert_eq!(code, 0);
    assert!(stdout.trim().starts_with('1'), "{stdout}");
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, stderr) = run(&["eval", "--builtin", "bogus", "--order", "5"]);
    assert_eq!(code, 2, "{stderr}");
    let (code, _, _) = run(&["verify", "--r", "9..10"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["verify", "--order", "5"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["verify", "--tol", "1"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["modularity", "--theorem", "9.9"]);
    assert_eq!(code, 2);
}

#[test]
fn modularity_levels_match_closed_forms() {
    let (code, stdout, _) = run(&["modularity", "--theorem", "4.1", "--r", "2..3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("level 6272"), "{stdout}");
    assert!(stdout.contains("level 15488"), "{stdout}");
    let (code, stdout, _) = run(&["modularity", "--theorem", "4.4", "--r", "2..2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("level 1600"), "{stdout}");
}

#[test]
fn verify_report_results_are_deterministic() {
    let dir = std::env::temp_dir().join("nahmforge-cli-test-report");
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    for path in [&a, &b] {
        let (code, _, stderr) = run(&[
            "verify",
            "--suite",
            "identities,modularity",
            "--r",
            "2..2",
            "--order",
            "12",
            "--json",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{stderr}");
    }
    let ja: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let jb: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    assert_eq!(ja["results"], jb["results"]);
    assert_eq!(ja["failed"], 0);
    assert!(ja["results"].as_array().unwrap().len() > 30);
}

#[test]
fn config_file_fields_are_overridden_by_flags() {
    let dir = std::env::temp_dir().join("nahmforge-cli-test-config");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"r_min":2,"r_max":2,"order":5,"suites":["identities"]}"#,
    )
    .unwrap();
    // the file's order violates the invariant; the flag must win
    let (code, stdout, _) = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--order",
        "12",
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("0 failed"), "{stdout}");
    // without the override the config is rejected as a usage error
    let (code, _, _) = run(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
}
