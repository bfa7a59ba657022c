use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_szilard-lab");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("SZILARD_LAB_THREADS").output().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("szilard-lab-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn switch_prints_reset_work() {
    let o = run(&["switch", "--epsilon", "0.04", "--theta", "1"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["W"].as_f64().unwrap() - 25f64.ln()).abs() < 1e-12);
    assert_eq!(v["tau"].as_f64().unwrap(), 25.0);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["selftest"]).status.code(), Some(0));
    assert_eq!(run(&["switch", "--epsilon", "0.9"]).status.code(), Some(1));
    assert_eq!(run(&["erase", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    // a grid too narrow for the wavefunction is a numerical failure
    assert_eq!(run(&["molecule", "--b", "30", "--n-grid", "256"]).status.code(), Some(2));
}

#[test]
fn malformed_config_is_a_usage_error() {
    let d = tmp("badcfg");
    let cfg = d.join("c.json");
    std::fs::write(&cfg, r#"{"params": {"tlt": 3}}"#).unwrap();
    let o = run(&["erase", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tlt"));
    std::fs::write(&cfg, "{not json").unwrap();
    assert_eq!(run(&["erase", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn flags_override_config_and_outputs_land_in_run_dir() {
    let d = tmp("layout");
    let cfg = d.join("erase.json");
    std::fs::write(&cfg, r#"{"run": {"n_traj": 50, "master_seed": 3}, "params": {"tilt": 3.5, "lower_time": 2}}"#)
        .unwrap();
    let out = d.join("run1");
    let o = run(&[
        "erase",
        "--config",
        cfg.to_str().unwrap(),
        "--traj",
        "8",
        "--seed",
        "42",
        "--record",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = json(&out.join("summary.json"));
    assert_eq!(s["config"]["run"]["n_traj"], 8);
    assert_eq!(s["config"]["run"]["master_seed"], 42);
    assert_eq!(s["config"]["params"]["tilt"], 3.5);
    assert_eq!(s["config"]["params"]["lower_time"], 2.0);
    assert_eq!(s["result"]["n_traj"], 8);
    for key in
        ["protocol", "params", "W_out", "W_ctrl", "dissipated", "epsilon_hat", "epsilon_ci", "net_balance", "seed"]
    {
        assert!(s["result"].get(key).is_some(), "missing {key}");
    }

    let m = json(&out.join("manifest.json"));
    assert_eq!(m["subcommand"], "erase");
    assert_eq!(m["config_digest"], s["config_digest"]);
    assert!(m["timestamp_unix"].as_u64().unwrap() > 0);
    let outputs: Vec<&str> = m["outputs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(outputs.contains(&"summary.json") && outputs.contains(&"trajectories.csv"));

    let csv = std::fs::read_to_string(out.join("trajectories.csv")).unwrap();
    assert!(csv.starts_with("traj_id,t,x,a,b,f,E,W_in,W_out,Q\n"));
    // summary carries no timestamp, so a rerun reproduces it exactly
    let again = d.join("run2");
    let args = ["erase", "--config", cfg.to_str().unwrap(), "--traj", "8", "--seed", "42", "--out"];
    assert!(run(&[&args[..], &[again.to_str().unwrap()]].concat()).status.success());
    assert_eq!(std::fs::read(out.join("summary.json")).unwrap(), std::fs::read(again.join("summary.json")).unwrap());
}

#[test]
fn molecule_sweep_columns() {
    let o = run(&["molecule", "--b", "2,6"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("b,barrier_height,E0,E1,splitting,tau_inv,classification"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn switch_sweeps_one_parameter() {
    let o = run(&["switch", "--theta", "1", "--sweep", "epsilon", "--values", "0.5,0.04"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "T,omega0,D,tau0,Theta,W,epsilon,tau,N,W_gate");
    let w: f64 = rows[2].split(',').nth(5).unwrap().parse().unwrap();
    assert!((w - 25f64.ln()).abs() < 1e-12);
}
