//! End-to-end tests running the compiled binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relay-market"))
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("relay-market-test-{}-{name}", std::process::id()))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

const STATIC_SCENARIO: &str = r#"{
  "geometry": {
    "user_positions": [[-15, 3], [-10, 0], [-5, -3]],
    "destination_positions": [[5, 3], [5, 0], [5, -3]],
    "relay_position": [0, 0]
  },
  "q_db": 10.0,
  "relay_power_db": 15.0
}"#;

#[test]
fn round_trip_scenario_reproduces_outputs() {
    let scenario_path = tmp("roundtrip-scenario.json");
    let first_out = tmp("roundtrip-a.json");
    let second_out = tmp("roundtrip-b.json");
    fs::write(&scenario_path, STATIC_SCENARIO).unwrap();

    let out = run(&[
        "allocate",
        "--scenario",
        scenario_path.to_str().unwrap(),
        "--lambda",
        "0.0027",
        "--format",
        "json",
        "--out",
        first_out.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    // Re-ingest the emitted linear-scale scenario and solve again.
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&first_out).unwrap()).unwrap();
    let echoed = tmp("roundtrip-echoed.json");
    fs::write(&echoed, serde_json::to_string(&report["scenario"]).unwrap()).unwrap();

    let out = run(&[
        "allocate",
        "--scenario",
        echoed.to_str().unwrap(),
        "--lambda",
        "0.0027",
        "--format",
        "json",
        "--out",
        second_out.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let again: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&second_out).unwrap()).unwrap();
    assert_eq!(report["schemes"], again["schemes"]);
    assert_eq!(report["scenario"], again["scenario"]);
}

#[test]
fn reproduce_is_deterministic_under_a_seed() {
    let a = tmp("fig3-a.csv");
    let b = tmp("fig3-b.csv");
    for path in [&a, &b] {
        let out = run(&[
            "reproduce",
            "fig3",
            "--trials",
            "40",
            "--seed",
            "42",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn table1_has_fifteen_rows() {
    let out = run(&["reproduce", "table1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 16);
    assert_eq!(
        lines[0],
        "lambda,scheme,rate1,rate2,rate3,fairness,sum_rate"
    );
    assert!(lines[1].starts_with("0.000000000000e0,ksbs,"));
}

#[test]
fn fig8_covers_the_price_grid() {
    let out = run(&["reproduce", "fig8"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 601);
}

#[test]
fn config_errors_exit_with_code_two() {
    // No scenario source at all.
    let out = run(&["allocate"]);
    assert_eq!(out.status.code(), Some(2));

    // Malformed JSON.
    let bad = tmp("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let out = run(&["price", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Two scenario sources in one section.
    let twice = tmp("twice.json");
    fs::write(
        &twice,
        r#"{"users": [{"q": 10, "f2": 0.1, "g2": 0.1, "h2": 0.0}],
            "geometry": {"user_positions": [[0,1]], "destination_positions": [[2,0]], "relay_position": [1,0]},
            "relay_power": 10.0}"#,
    )
    .unwrap();
    let out = run(&["price", "--scenario", twice.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // dB and linear spellings of the same field.
    let both = tmp("both.json");
    fs::write(
        &both,
        r#"{"users": [{"q": 10, "q_db": 10, "f2": 0.1, "g2": 0.1, "h2": 0.0}], "relay_power": 10.0}"#,
    )
    .unwrap();
    let out = run(&["price", "--scenario", both.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_with_code_three() {
    let scenario_path = tmp("domain-scenario.json");
    fs::write(&scenario_path, STATIC_SCENARIO).unwrap();

    let out = run(&[
        "allocate",
        "--scenario",
        scenario_path.to_str().unwrap(),
        "--lambda",
        "-0.5",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // A market where nobody can buy has no price.
    let dead = tmp("dead.json");
    fs::write(
        &dead,
        r#"{"users": [{"q": 10, "f2": 0.0, "g2": 0.0, "h2": 0.01}], "relay_power": 10.0}"#,
    )
    .unwrap();
    let out = run(&["price", "--scenario", dead.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn priced_out_allocation_warns_and_succeeds() {
    let scenario_path = tmp("pricedout-scenario.json");
    fs::write(&scenario_path, STATIC_SCENARIO).unwrap();
    let out = run(&[
        "allocate",
        "--scenario",
        scenario_path.to_str().unwrap(),
        "--lambda",
        "0.0099",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("priced out"));
}

#[test]
fn lambda_grid_switches_allocate_to_a_sweep() {
    let cfg = tmp("grid-config.json");
    fs::write(
        &cfg,
        format!(
            r#"{{"scenario": {STATIC_SCENARIO}, "run": {{"lambda_grid": [0.0, 0.0027]}}}}"#
        ),
    )
    .unwrap();
    let out_path = tmp("grid.csv");
    let out = run(&[
        "allocate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines[0].starts_with("swept_value,scheme,lambda,"));

    // The same grid is rejected when a lambda flag competes with it.
    let out = run(&[
        "allocate",
        "--config",
        cfg.to_str().unwrap(),
        "--lambda",
        "0.001",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn price_reports_the_static_network_optimum() {
    let scenario_path = tmp("price-scenario.json");
    fs::write(&scenario_path, STATIC_SCENARIO).unwrap();
    let json_path = tmp("price.json");
    let out = run(&[
        "price",
        "--scenario",
        scenario_path.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        json_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("lambda_star 2.597475464104e-3"));

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    let solution = &report["solution"];
    assert_eq!(solution["lambda_star"], solution["b_lb"]);
    assert_eq!(report["scenario"]["users"].as_array().unwrap().len(), 3);
}
