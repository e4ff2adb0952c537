use std::fs;
use std::process::{Command, Output};

fn podchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_podchain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn small_config(dir: &std::path::Path) -> String {
    let path = dir.join("scenario.toml");
    fs::write(
        &path,
        "seed = 11\ncapacity = 6\nmessage_bits = 32\ndevices = 2\nnodes = 2\npayload_bytes = 256\n",
    )
    .unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn run_writes_report_and_logs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("out");
    let o = podchain(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("ok seed=11"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["outcome"], "paid-delivered");
    assert!(report.get("timings").is_none());
    let events = fs::read_to_string(out.join("events.jsonl")).unwrap();
    for line in events.lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
    assert!(fs::read_to_string(out.join("trace.jsonl"))
        .unwrap()
        .contains("\"gamma\""));
}

#[test]
fn run_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let a = podchain(&["run", "--config", &cfg, "--seed", "5"]);
    let b = podchain(&["run", "--config", &cfg, "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn adversary_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let o = podchain(&["run", "--config", &cfg, "--adversary", "node-skips-delta2"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["outcome"], "refunded-undelivered");
    assert_eq!(report["vendor"]["refund"], 20);
}

#[test]
fn config_violation_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, "devices = 3\nnodes = 1\n").unwrap();
    let o = podchain(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "usage");
    assert_eq!(err["field"], "nodes");
}

#[test]
fn unsatisfiable_policy_expects_refund() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unsat.toml");
    // honest, but the device policy cannot be satisfied by the contract's set
    fs::write(
        &path,
        "capacity = 6\nmessage_bits = 32\npolicies = [\"Z\"]\n",
    )
    .unwrap();
    let o = podchain(&["run", "--config", path.to_str().unwrap()]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["expected"], "refunded-undelivered");
}

#[test]
fn suite_reports_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("suite");
    let o = podchain(&[
        "suite",
        "--config",
        &cfg,
        "--seeds",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("10 runs, 0 unexpected"));
    let rows: Vec<serde_json::Value> =
        serde_json::from_str(&fs::read_to_string(out.join("suite.json")).unwrap()).unwrap();
    assert_eq!(rows.len(), 10);
}

#[test]
fn keygen_demo_vectors_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("vectors.json");
    let o = podchain(&[
        "keygen-demo",
        "--policy",
        "A AND B",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("2x2 matrix"));
    let o = podchain(&["keygen-demo", "--verify", file.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let mut v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    v["message"] = "00".into();
    fs::write(&file, v.to_string()).unwrap();
    let o = podchain(&["keygen-demo", "--verify", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    let o = podchain(&["keygen-demo", "--policy", "A AND NOT B"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_emits_table() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bench.json");
    let o = podchain(&[
        "bench",
        "--counts",
        "1,2",
        "--iterations",
        "2",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("OABS"));
    assert!(stdout.contains("ElGamal"));
    let table: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    assert!(table["rows"].as_array().unwrap().len() >= 6);
}

#[test]
fn bad_adversary_is_machine_readable() {
    let o = podchain(&["run", "--adversary", "nobody"]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "usage");
}
