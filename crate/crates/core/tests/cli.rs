use std::process::{Command, Output};

use coulomb_irregular::closedform::{assemble_r2, QuantumNumbers};
use coulomb_irregular::export::parse_form_json;
use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coulomb-irregular"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_of(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn coeffs_ground_state_json() {
    let v = json_of(&run(&["coeffs", "--n", "1", "--l", "0"]));
    assert_eq!(
        v,
        json!({"q_plus": {"-1": "1/2"}, "q_ei": {"0": "1"}, "ei_arg_scale": "-2"})
    );
}

#[test]
fn coeffs_json_round_trips() {
    for qn in QuantumNumbers::enumerate(6) {
        let (n, l) = (qn.n().to_string(), qn.l().to_string());
        let v = json_of(&run(&["coeffs", "--n", &n, "--l", &l]));
        let (q_plus, q_minus, q_ei, scale) = parse_form_json(v.as_object().unwrap()).unwrap();
        let f = assemble_r2(&qn);
        assert_eq!((&q_plus, &q_minus, &q_ei), (&f.q_plus, &f.q_minus, &f.q_ei), "{qn}");
        assert_eq!(scale, Some(f.ei_arg_scale()), "{qn}");
    }
}

#[test]
fn coeffs_csv_rows() {
    let out = run(&["coeffs", "--n", "3", "--l", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let expected = "bucket,power,coefficient\n\
                    q_plus,-3,81\nq_plus,-2,27/2\nq_plus,-1,3\nq_plus,0,1\nq_plus,1,2/3\n\
                    q_ei,2,4/9\nei_arg_scale,,-2/3\n";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        vec!["coeffs", "--n", "5", "--l", "5"],
        vec!["coeffs", "--n", "0", "--l", "0"],
        vec!["coeffs", "--n", "2", "--l", "-1"],
        vec!["eval", "--n", "1", "--l", "0", "--grid", "1:2:3", "--format", "latex"],
        vec!["eval", "--n", "1", "--l", "0", "--grid", "nonsense"],
        vec!["shell", "--n", "2", "--l", "0", "--a", "0.1", "--b-range", "2:1"],
        vec!["frobnicate"],
    ] {
        assert_eq!(run(&args).status.code(), Some(64), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn eval_ground_state_values() {
    let r1 = json_of(&run(&["eval", "--n", "1", "--l", "0", "--which", "R1", "--grid", "1:1:1"]));
    let v1 = r1[0]["value"].as_f64().unwrap();
    assert!((v1 - (-1.0f64).exp()).abs() < 1e-15);

    // R₂(1,0,1) = e/2 - e⁻¹ Ei(2)
    let r2 = json_of(&run(&["eval", "--n", "1", "--l", "0", "--grid", "1:1:1"]));
    let v2 = r2[0]["value"].as_f64().unwrap();
    assert!((v2 - -0.463420052088813).abs() < 1e-13, "{v2}");
}

#[test]
fn empty_grid_prints_header_only() {
    let out = run(&["eval", "--n", "1", "--l", "0", "--grid", "1:2:0", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "r,value,est_rel_error,method\n");
}

#[test]
fn verify_small_range_passes() {
    let out = run(&["verify", "--nmax", "4"]);
    let v = json_of(&out);
    let reports = v.as_array().unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r["passed"] == json!(true)));
}

#[test]
fn parallel_verify_matches_sequential() {
    let args = ["verify", "--nmax", "6", "--checks", "golden,ode,wronskian,p2"];
    let seq = run(&args);
    let par = run(&[&args[..], &["--parallel"]].concat());
    assert_eq!(seq.status.code(), Some(0));
    assert_eq!(seq.stdout, par.stdout);
    assert_eq!(seq.stdout, run(&args).stdout);
}

#[test]
fn corrupted_golden_file_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("golden.json");
    let entries = json!([{"n": 1, "l": 0, "q_plus": {"-1": "1/3"}, "q_ei": {"0": "1"}}]);
    std::fs::write(&path, entries.to_string()).unwrap();
    let out = run(&[
        "verify",
        "--nmax",
        "1",
        "--checks",
        "golden",
        "--golden-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("golden"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coeffs.json");
    let out = run(&["coeffs", "--n", "2", "--l", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, json_of(&run(&["coeffs", "--n", "2", "--l", "1"])));
}

#[test]
fn shell_demo_thin_shell_is_nearly_regular() {
    let v = json_of(&run(&["shell", "--n", "2", "--l", "0", "--a", "1e-4", "--b-range", "0.5:1.5"]));
    let (c1, c2) = (v["c1"].as_f64().unwrap(), v["c2"].as_f64().unwrap());
    assert!(c2.abs() / c1.abs() < 1e-6, "c1={c1} c2={c2}");
}

#[test]
fn shell_demo_wide_shell_reports_root_or_no_root() {
    let out = run(&["shell", "--n", "2", "--l", "0", "--a", "0.5", "--b-range", "0.6:40"]);
    match out.status.code() {
        Some(0) => assert!(json_of(&out)["b_star"].as_f64().unwrap() > 0.6),
        Some(2) => assert!(!out.stderr.is_empty()),
        other => panic!("unexpected exit {other:?}"),
    }
}
