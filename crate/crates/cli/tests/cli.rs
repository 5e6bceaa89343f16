use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use qpf_core::qsim::parse_circuit;
use serde_json::Value;

fn qpf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpf"))
        .args(args)
        .output()
        .unwrap()
}

fn qpf_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qpf"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_line(out: &Output) -> String {
    let s = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(s.lines().count(), 1, "{s:?}");
    s
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qpf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const TWO_BUS: &str = r#"{"base_mva": 100.0,
  "buses": [{"id": 1, "slack": true, "p_pu": 0.0}, {"id": 2, "slack": false, "p_pu": 1.0}],
  "branches": [{"from": 1, "to": 2, "x_pu": 0.1}]}"#;

#[test]
fn classical_solve_json() {
    let v = stdout_json(&qpf(&[
        "solve",
        "--fixture",
        "wscc9",
        "--method",
        "classical",
    ]));
    assert_eq!(v["method"], "classical");
    let order: Vec<u64> = v["bus_order"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(order, (2..=9).collect::<Vec<_>>());
    assert_eq!(v["theta_rad"].as_array().unwrap().len(), 8);
}

#[test]
fn hhl_solve_json() {
    let v = stdout_json(&qpf(&[
        "solve",
        "--fixture",
        "wscc9",
        "--method",
        "hhl",
        "--alpha",
        "5",
    ]));
    assert_eq!(v["metrics"]["width"], 9);
    for key in [
        "solution_unit",
        "success_probability",
        "recovered_norm",
        "fidelity",
        "residual_clock_leak",
        "config",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["config"]["alpha"], 5);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "solve",
        "--fixture",
        "wscc9",
        "--method",
        "hhl",
        "--format",
        "text",
    ];
    assert_eq!(qpf(&args).stdout, qpf(&args).stdout);
    let args = ["crossover", "--format", "json"];
    assert_eq!(qpf(&args).stdout, qpf(&args).stdout);
}

#[test]
fn verbose_banner_only_on_stderr() {
    let quiet = qpf(&["stats", "--fixture", "wscc9"]);
    let loud = qpf(&["stats", "--fixture", "wscc9", "--verbose"]);
    assert_eq!(quiet.stdout, loud.stdout);
    assert!(quiet.stderr.is_empty());
    assert!(String::from_utf8_lossy(&loud.stderr).starts_with("qpf "));
}

#[test]
fn stdin_network() {
    let out = qpf_stdin(&["solve", "--input", "-", "--format", "csv"], TWO_BUS);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("bus,theta_rad"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "2");
    assert!((row[1].parse::<f64>().unwrap() - 0.1).abs() < 1e-12);
}

#[test]
fn crossover_report() {
    let v = stdout_json(&qpf(&[
        "crossover",
        "--s",
        "6",
        "--k",
        "0.1",
        "--eps-classical",
        "0.1",
        "--eps-quantum",
        "0.37",
        "--base-ratio",
        "34",
    ]));
    let n_star = v["n_star"].as_f64().unwrap();
    assert!((100.0..=300.0).contains(&n_star), "{n_star}");
    assert_eq!(v["convention"]["classical_log_eps_base"], "e");
    assert_eq!(v["convention"]["quantum_log_n_base"], "2");
}

#[test]
fn sweep_csv_to_file() {
    let path = scratch("sweep.csv");
    let out = qpf(&[
        "sweep",
        "--n-min",
        "10",
        "--n-max",
        "2000",
        "--steps",
        "25",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,classical_cost,quantum_cost_scaled\n"));
    assert_eq!(text.lines().count(), 26);
}

#[test]
fn dump_parses_back() {
    let path = scratch("hhl.qc");
    let out = qpf(&[
        "solve",
        "--fixture",
        "wscc9",
        "--method",
        "hhl",
        "--dump",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let circuit = parse_circuit(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(circuit.num_qubits(), 9);
}

#[test]
fn metrics_matches_solve() {
    let m = stdout_json(&qpf(&["metrics", "--fixture", "wscc9"]));
    let v = stdout_json(&qpf(&["solve", "--fixture", "wscc9", "--method", "hhl"]));
    assert_eq!(m, v["metrics"]);
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        vec!["solve"],
        vec!["solve", "--fixture", "wscc9", "--unknown-flag"],
        vec!["solve", "--fixture", "wscc9", "--input", "x.json"],
        vec![
            "solve",
            "--fixture",
            "wscc9",
            "--method",
            "hhl",
            "--alpha",
            "0",
        ],
        vec!["crossover", "--eps-classical", "1.5"],
        vec!["crossover", "--log-n-base", "3"],
        vec!["solve", "--input", "/nonexistent/network.json"],
    ] {
        let out = qpf(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(stderr_line(&out).starts_with("qpf: error: usage:"));
    }
}

#[test]
fn invalid_network_exit_1() {
    let two_slacks = TWO_BUS.replace(r#""slack": false"#, r#""slack": true"#);
    let out = qpf_stdin(&["solve", "--input", "-"], &two_slacks);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_line(&out).contains("multiple slacks"));
}

#[test]
fn numerical_failures_exit_2() {
    let disconnected = r#"{"base_mva": 100.0,
      "buses": [{"id": 1, "slack": true, "p_pu": 0.0}, {"id": 2, "slack": false, "p_pu": 1.0},
                {"id": 3, "slack": false, "p_pu": -1.0}],
      "branches": [{"from": 1, "to": 2, "x_pu": 0.1}]}"#;
    let out = qpf_stdin(&["solve", "--input", "-"], disconnected);
    assert_eq!(out.status.code(), Some(2));
    stderr_line(&out);

    let out = qpf(&["crossover", "--eps-quantum", "1e-9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_line(&out).contains("no crossover"));
}

#[test]
fn post_selection_failure_exit_3() {
    let out = qpf(&[
        "solve",
        "--fixture",
        "wscc9",
        "--method",
        "hhl",
        "--c",
        "1e-8",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_line(&out).starts_with("qpf: error: post_selection:"));
}

#[test]
fn help_exits_0() {
    let out = qpf(&["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("crossover"));
}
