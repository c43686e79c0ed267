//! End-to-end tests of the `qcb` binary: exit codes, output formats,
//! determinism and the documented CSV headers.

use std::process::{Command, Output};

fn qcb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcb"))
        .args(args)
        .output()
        .expect("spawn qcb")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_fields(line: &str) -> Vec<f64> {
    line.split(',')
        .map(|f| f.parse::<f64>().unwrap_or(f64::NAN))
        .collect()
}

#[test]
fn metric_csv_header_and_zero_temperature_values() {
    let out = qcb(&[
        "metric", "--zero-t", "--gamma", "1", "--lambda", "0", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "lambda,gamma,T,g_bb,g_bg,g_bl,g_gg,g_gl,g_ll,nc_gg,nc_gl,nc_ll,max_eig"
    );
    let row = csv_fields(lines.next().unwrap());
    // Classical columns report the zero-temperature limit 0; nc_ll = 1/8.
    for &v in &row[3..9] {
        assert_eq!(v, 0.0);
    }
    assert!((row[11] - 0.125).abs() < 1e-9);
    assert!((row[12] - 0.125).abs() < 1e-9);
}

#[test]
fn metric_json_matches_flags_and_tanh_correction() {
    let out = qcb(&["metric", "--beta", "10", "--gamma", "1", "--lambda", "0"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let nc_ll = doc["nonclassical"]["ll"].as_f64().unwrap();
    let expected = 0.125 * (5.0f64).tanh().powi(2);
    assert!((nc_ll - expected).abs() < 1e-6, "{nc_ll} vs {expected}");
    assert_eq!(doc["converged"], serde_json::json!(true));
}

#[test]
fn metric_xx_line_has_exact_zero_column() {
    let out = qcb(&[
        "metric", "--beta", "2", "--gamma", "0", "--lambda", "0.5", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = csv_fields(text.lines().nth(1).unwrap());
    assert_eq!(row[10], 0.0); // nc_gl
    assert_eq!(row[11], 0.0); // nc_ll
}

#[test]
fn invalid_input_exits_2() {
    let out = qcb(&["metric", "--beta", "2", "--gamma", "2", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qcb(&["metric", "--gamma", "0.5", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(2)); // no temperature given
    let out = qcb(&["metric", "--t", "0", "--gamma", "0.5", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn contour_is_deterministic_and_symmetric() {
    let args = [
        "contour",
        "--lambda-min",
        "-0.7",
        "--lambda-max",
        "0.7",
        "--lambda-count",
        "2",
        "--gamma-min",
        "0.3",
        "--gamma-max",
        "0.6",
        "--gamma-count",
        "2",
        "--t",
        "0.05",
        "--cap",
        "none",
        "--jobs",
        "3",
    ];
    let first = qcb(&args);
    let second = qcb(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "output must be byte-identical");

    let text = stdout(&first);
    let rows: Vec<Vec<f64>> = text.lines().skip(1).map(csv_fields).collect();
    assert_eq!(rows.len(), 4);
    // λ is the outer loop.
    assert_eq!(rows[0][0], -0.7);
    assert_eq!(rows[1][0], -0.7);
    assert_eq!(rows[2][0], 0.7);
    // λ-parity: max_eig at (λ, γ) equals max_eig at (−λ, γ).
    assert!((rows[0][3] - rows[2][3]).abs() < 1e-9 * rows[0][3].abs());
    assert!((rows[1][3] - rows[3][3]).abs() < 1e-9 * rows[1][3].abs());
}

#[test]
fn contour_single_cell_matches_metric() {
    let point = [
        "--lambda-min",
        "0.4",
        "--lambda-max",
        "0.4",
        "--lambda-count",
        "1",
        "--gamma-min",
        "0.8",
        "--gamma-max",
        "0.8",
        "--gamma-count",
        "1",
        "--t",
        "0.5",
        "--cap",
        "none",
    ];
    let contour = qcb(&[&["contour"][..], &point[..]].concat());
    assert!(contour.status.success());
    let text = stdout(&contour);
    let row = csv_fields(text.lines().nth(1).unwrap());

    let metric = qcb(&[
        "metric", "--t", "0.5", "--gamma", "0.8", "--lambda", "0.4", "--format", "csv",
    ]);
    let mtext = stdout(&metric);
    let mrow = csv_fields(mtext.lines().nth(1).unwrap());
    assert!((row[3] - mrow[12]).abs() <= 1e-12 * mrow[12].abs());
}

#[test]
fn contour_caps_values_by_default() {
    let out = qcb(&[
        "contour",
        "--lambda-min",
        "1",
        "--lambda-max",
        "1",
        "--lambda-count",
        "1",
        "--gamma-min",
        "0.5",
        "--gamma-max",
        "0.5",
        "--gamma-count",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = csv_fields(text.lines().nth(1).unwrap());
    assert_eq!(row[3], 3.0, "critical point must clip at the default cap");
}

#[test]
fn scaling_expected_pass_and_fail_exit_codes() {
    let out = qcb(&[
        "scaling",
        "--gamma",
        "1",
        "--lambda",
        "1",
        "--critical",
        "--component",
        "nc_ll",
        "--expected",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let alpha: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((alpha + 1.0).abs() < 0.05, "alpha {alpha}");

    // A window too hot to reach the asymptotic exponent fails the check.
    let out = qcb(&[
        "scaling",
        "--gamma",
        "1",
        "--lambda",
        "1",
        "--critical",
        "--component",
        "nc_ll",
        "--expected",
        "--t-min",
        "5e-1",
        "--t-max",
        "5e0",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn scaling_rejects_critical_flag_off_the_critical_lines() {
    let out = qcb(&["scaling", "--gamma", "1", "--lambda", "1.5", "--critical"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_check_passes_default_suite_and_honors_threshold() {
    let out = qcb(&["oracle-check", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "beta,gamma,lambda,db,dg,dl,analytic,oracle,rel_err,pass"
    );
    assert_eq!(text.lines().count(), 7); // header + 6 canonical directions
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",true"));
    }

    // An absurdly tight threshold must breach and exit 4.
    let out = qcb(&["oracle-check", "--threshold", "1e-14"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn config_file_mirrors_flags() {
    let dir = std::env::temp_dir().join(format!("qcb-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.json");
    std::fs::write(
        &path,
        r#"{"command": "metric", "beta": 10.0, "gamma": 1.0, "lambda": 0.0, "format": "csv"}"#,
    )
    .unwrap();
    let from_config = qcb(&["--config", path.to_str().unwrap()]);
    assert!(from_config.status.success());
    let from_flags = qcb(&[
        "metric", "--beta", "10", "--gamma", "1", "--lambda", "0", "--format", "csv",
    ]);
    assert_eq!(from_config.stdout, from_flags.stdout);

    // Unknown keys are rejected rather than silently ignored.
    std::fs::write(&path, r#"{"command": "metric", "beta": 1.0, "bogus": 1}"#).unwrap();
    let bad = qcb(&["--config", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("qcb-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("metric.csv");
    let out = qcb(&[
        "metric",
        "--beta",
        "2",
        "--gamma",
        "0.8",
        "--lambda",
        "0.3",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("lambda,gamma,T,"));
    std::fs::remove_dir_all(&dir).ok();
}
