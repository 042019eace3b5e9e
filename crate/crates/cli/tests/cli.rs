//! The `fibnest` binary end to end: exit codes, config precedence and the
//! table and plot outputs.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fibnest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibnest"))
        .args(args)
        .env_remove("FIBNEST_PRECISION")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&fibnest(&["find-param", "--depth", "0"])), 64);
    assert_eq!(code(&fibnest(&["verify", "--suite", "thm9"])), 64);
    assert_eq!(code(&fibnest(&["nest", "--levels", "0"])), 64);
    assert_eq!(code(&fibnest(&["cutting-times", "--output", ""])), 64);
    assert_eq!(code(&fibnest(&["cutting-times", "--a", "1.5"])), 64);
    assert_eq!(code(&fibnest(&["--help"])), 0);
}

#[test]
fn budget_errors_exit_2() {
    let o = fibnest(&["find-param", "--ell", "2", "--depth", "30"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    assert_eq!(code(&fibnest(&["plot-return-map", "--level", "13"])), 2);
}

#[test]
fn failing_suite_exits_1() {
    let o = fibnest(&["verify", "--suite", "lemma2", "--a", "1"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["passed"], false);
}

#[test]
fn thm1_at_the_frozen_parameter_passes() {
    let o = fibnest(&["verify", "--suite", "thm1", "--levels", "8"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["passed"], true);
    for c in r["clauses"].as_array().unwrap() {
        assert!(c["depth"].as_u64().unwrap() > 0);
        assert!(c["tolerance"]["hex"].as_str().unwrap().starts_with("0x1p-"));
    }
}

#[test]
fn full_map_cutting_times_are_consecutive() {
    let o = fibnest(&[
        "cutting-times",
        "--a",
        "1",
        "--horizon",
        "12",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let times: Vec<u64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(times, (1..=12).collect::<Vec<u64>>());
}

#[test]
fn nest_table_carries_fibonacci_return_times() {
    let o = fibnest(&["nest", "--levels", "8"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    let fib = [1u64, 2, 3, 5, 8, 13, 21, 34, 55, 89];
    let rows = r["levels"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in rows {
        let k = row["k"].as_u64().unwrap() as usize;
        assert_eq!(row["central_return_time"].as_u64(), Some(fib[k + 1]));
        assert_eq!(row["lateral_return_times"], serde_json::json!([fib[k]]));
    }
}

#[test]
fn flags_beat_config_which_beats_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "precision = 200\nhorizon = 20\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let prec = |extra: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_fibnest"));
        cmd.args(["cutting-times"]).args(extra);
        match env {
            Some(v) => cmd.env("FIBNEST_PRECISION", v),
            None => cmd.env_remove("FIBNEST_PRECISION"),
        };
        let o = cmd.output().unwrap();
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        stdout_json(&o)["precision"].as_u64().unwrap()
    };
    assert_eq!(prec(&[], None), 512);
    assert_eq!(prec(&[], Some("160")), 160);
    assert_eq!(prec(&["--config", cfg], Some("160")), 200);
    assert_eq!(
        prec(&["--config", cfg, "--precision", "300"], Some("160")),
        300
    );
}

#[test]
fn output_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("order.csv");
    let o = fibnest(&[
        "orbit-order",
        "--count",
        "8",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let order: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(order, ["2", "7", "3", "8", "5", "4", "6", "1"]);
}

fn polylines(svg: &str) -> usize {
    svg.matches("<polyline").count()
}

#[test]
fn return_map_plot_has_one_branch_per_domain() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("r1.svg");
    let o = fibnest(&[
        "plot-return-map",
        "--level",
        "1",
        "--output",
        svg_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary = stdout_json(&o);
    assert_eq!(summary["return_times"], serde_json::json!([2, 3]));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(polylines(&svg), 2);
    assert!(!svg.contains("href"));
    let csv = std::fs::read_to_string(Path::new(&svg_path).with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 256);
}

#[test]
fn plot_of_u_level_three() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("u3.svg");
    let o = fibnest(&[
        "plot-return-map",
        "--level",
        "3",
        "--on",
        "u",
        "--output",
        svg_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut times: Vec<u64> = stdout_json(&o)["return_times"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_u64().unwrap())
        .collect();
    times.sort_unstable();
    assert_eq!(times, [5, 8]);
}
