use std::path::Path;
use std::process::{Command, Output};

fn lehmer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lehmer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn transform_arithmetic_mean() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h.csv", "value\n1\n2\n4\n");
    let out = lehmer(&["transform", &input, "--s", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "s,value\n1,2.3333333333333335\n");
}

#[test]
fn transform_at_infinity_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h.json", "[1, 2, 4]");
    let out = lehmer(&["transform", &input, "--s", "-inf", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["s"], "-inf");
    assert_eq!(v["value"], 1.0);
}

#[test]
fn invert_endpoint_record() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h.csv", "value\n1\n2\n4\n");
    let out = lehmer(&["invert", &input, "--target", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("target,moment,residual,iterations,method"));
    assert!(lines.next().unwrap().starts_with("4,+inf,0,"));
}

#[test]
fn invert_interior_target_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h.csv", "value\n1\n2\n4\n");
    let out = lehmer(&["invert", &input, "--target", "2.3333333333333335", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["moment"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(v["method"], "bisection-newton");
}

#[test]
fn constant_sample_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.csv", "value\n5\n5\n");
    let out = lehmer(&["invert", &input, "--target", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ConstantSample"));
}

#[test]
fn target_out_of_range_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h.csv", "value\n1\n2\n");
    let out = lehmer(&["invert", &input, "--target", "7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("TargetOutOfRange"));
}

#[test]
fn parse_errors_exit_two_with_row() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.csv", "value\n1\nabc\n");
    let out = lehmer(&["transform", &input, "--s", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ParseError at row 2"));

    let out = lehmer(&["transform", "/nonexistent/x.csv", "--s", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_positive_input_needs_explicit_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h.csv", "value\n-1\n0\n3\n");
    let out = lehmer(&["transform", &input, "--s", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--normalize"));

    let out = lehmer(&["transform", &input, "--s", "+inf", "--normalize", "affine-unit:0.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "s,value\n+inf,1.5\n");
}

#[test]
fn spectrum_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h.csv", "time,value\n0,1\n1,2\n2,4\n");
    let out = lehmer(&["spectrum", &input]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 243);
    assert_eq!(lines[1], "-inf,1");
    assert_eq!(lines[243], "+inf,4");
}

#[test]
fn spectrogram_serial_and_parallel_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("value\n");
    for i in 0..600 {
        body.push_str(&format!("{}\n", (i as f64 * 0.1).sin()));
    }
    let input = write(dir.path(), "sig.csv", &body);
    let base = ["spectrogram", &input, "--width", "64", "--hop", "16", "--normalize", "affine-unit:0.01"];
    let serial = lehmer(&base);
    let mut parallel_args = base.to_vec();
    parallel_args.push("--parallel");
    let parallel = lehmer(&parallel_args);
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(serial.stdout, parallel.stdout);
    assert!(stdout(&serial).starts_with("window_start,s,value\n0,-inf,"));
}

#[test]
fn breve_pdf_and_modes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h.csv", "value\n1\n2\n3\n5\n");
    let out = lehmer(&["breve-pdf", &input, "--alpha", "0.5", "--beta", "1", "--grid", "-2:2:5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 6);
    for line in text.lines().skip(1) {
        let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(v >= 0.0);
    }
    let out = lehmer(&["modes", &input, "--alpha", "0.5", "--beta", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let modes: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(modes.as_array().unwrap().iter().any(|m| m["kind"] == "maximum"));
}

#[test]
fn invalid_breve_parameters_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h.csv", "value\n1\n2\n");
    let out = lehmer(&["log-breve-pdf", &input, "--alpha", "2", "--beta", "1", "--s", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn features_windowed() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h.csv", "value\n1\n2\n3\n4\n5\n6\n");
    let out = lehmer(&["features", &input, "--width", "3", "--hop", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("window_start,label,s,value\n0,min,-inf,1\n"));
    assert!(text.contains("\n3,max,+inf,6\n"));
}

#[test]
fn output_file_written() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h.csv", "value\n1\n2\n4\n");
    let target = dir.path().join("out.json");
    let out = lehmer(&["cdf", &input, "--s", "+inf", "-o", target.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["value"], 1.0);
}
