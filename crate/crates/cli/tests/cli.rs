use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wiretap-ot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Lines that are not provenance comments.
fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn capacity_point() {
    let o = run(&["capacity", "--eps1", "0.5", "--eps2", "0.5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows = data_lines(&text);
    let header: Vec<&str> = rows[0].split(',').collect();
    let values: Vec<&str> = rows[1].split(',').collect();
    let c2p = header.iter().position(|&h| h == "c2p").unwrap();
    assert_eq!(values[c2p].parse::<f64>().unwrap(), 0.25);
    assert!(text.starts_with("# wiretap-ot "));
}

#[test]
fn capacity_grid() {
    let o = run(&["capacity", "--grid", "0.05"]);
    assert!(o.status.success());
    assert_eq!(data_lines(&stdout(&o)).len(), 362);
}

#[test]
fn capacity_rejects_bad_eps() {
    let o = run(&["capacity", "--eps1", "1.2", "--eps2", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("eps1"));
    assert!(o.stdout.is_empty());
}

const HONEST: &[&str] = &[
    "simulate", "--variant", "c2p", "--eps1", "0.5", "--eps2", "0.5", "--r", "0.15", "--n", "1500", "--trials", "12",
    "--master-seed", "21",
];

fn simulate_into(dir: &Path, extra: &[&str]) -> (Output, String, String) {
    let summary = dir.join("summary.csv");
    let trials = dir.join("trials.csv");
    let mut args = HONEST.to_vec();
    args.extend_from_slice(extra);
    let (s, t) = (summary.to_str().unwrap(), trials.to_str().unwrap());
    args.extend_from_slice(&["--summary", s, "--trials-out", t]);
    let o = run(&args);
    let read = |p: &Path| fs::read_to_string(p).unwrap_or_default();
    (o, read(&summary), read(&trials))
}

#[test]
fn simulate_summary_schema_and_trials() {
    let dir = tempfile::tempdir().unwrap();
    let (o, summary, trials) = simulate_into(dir.path(), &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_lines(&summary);
    assert_eq!(
        rows[0],
        "variant,attack,n,eps1,eps2,rate,trials,correct_rate,abort_rate,mean_residual_margin"
    );
    assert_eq!(rows.len(), 2);
    assert!(summary.contains("# master_seed: 21"));
    assert_eq!(data_lines(&trials).len(), 13);
}

#[test]
fn simulate_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (_, sa, ta) = simulate_into(a.path(), &[]);
    let (_, sb, tb) = simulate_into(b.path(), &[]);
    assert!(!sa.is_empty() && !ta.is_empty());
    // The config line records the output paths, which differ between runs.
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with("# config")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&sa), strip(&sb));
    assert_eq!(strip(&ta), strip(&tb));
}

#[test]
fn attack_runs_add_detection_rate() {
    let o = run(&[
        "simulate", "--variant", "mal_le_half", "--eps1", "0.4", "--eps2", "0.5", "--r", "0.005", "--n", "3000",
        "--trials", "6", "--master-seed", "2", "--attack", "bob_swap", "--attack-strength", "300",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows = data_lines(&text);
    assert!(rows[0].ends_with(",detection_rate"));
    assert!(rows[1].ends_with(",1"));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"variant": "c2p", "eps1": 0.5, "eps2": 0.5, "rate_fraction": 0.5, "n": 1000,
            "trials": 9, "master_seed": 4, "output": {"format": "json"}}"#,
    )
    .unwrap();
    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--trials", "3", "--r", "0.1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"][0]["trials"], 3);
    assert_eq!(v["provenance"]["config"]["r"], 0.1);
    assert!(v["provenance"]["config"]["rate_fraction"].is_null());
    assert_eq!(v["provenance"]["master_seed"], 4);
}

#[test]
fn simulate_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    let mut args = HONEST.to_vec();
    args.extend_from_slice(&["--summary", bad.to_str().unwrap()]);
    assert_eq!(run(&args).status.code(), Some(3));

    let mut args = HONEST.to_vec();
    args.extend_from_slice(&["--eps2", "0.2"]);
    assert_eq!(run(&args).status.code(), Some(2));

    assert_eq!(run(&["simulate", "--variant", "c2p"]).status.code(), Some(2));
    let cfg = dir.path().join("broken.json");
    fs::write(&cfg, "{not json").unwrap();
    assert_eq!(run(&["simulate", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn oracle_c2p_exact_zero() {
    let o = run(&["oracle", "--preset", "c2p"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let report = &v["report"];
    assert_eq!(report["i_u_aliceeve"].as_f64(), Some(0.0));
    assert!(report["family"].as_str().unwrap().starts_with("restricted-family"));
    assert_eq!(report["restricted"], true);
    assert!(report["enumeration_size"].as_u64().unwrap() > 0);
    assert_eq!(v["provenance"]["config"]["n"], 6);
}

#[test]
fn oracle_budget_overflow() {
    let o = run(&["oracle", "--preset", "c2p", "--n", "16"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("budget exceeded") && err.chars().any(|c| c.is_ascii_digit()), "{err}");
}

#[test]
fn ih_check_reports_each_property() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ih.json");
    let o = run(&[
        "ih-check", "--k-max", "3", "--sampled-k", "8", "--trials", "500", "--output", out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    for p in 1..=5 {
        assert!(text.contains(&format!("property {p} (")), "{text}");
    }
    assert_eq!(text.matches(": pass [").count(), 5);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["suite"]["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn ih_check_limits() {
    assert_eq!(run(&["ih-check", "--k-max", "5"]).status.code(), Some(2));
    assert_eq!(run(&["ih-check", "--sampled-k", "13"]).status.code(), Some(2));
}
