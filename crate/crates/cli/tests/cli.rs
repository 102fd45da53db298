use std::io::Write;
use std::process::{Command, Output, Stdio};

const MIXED: &str = r#"{"standard": true, "users": [
    {"gain_eavesdropper": 0.4, "power_max": 10},
    {"gain_eavesdropper": 1.4, "power_max": 10}]}"#;

fn gmacwt(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_gmacwt"))
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
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn reads_stdin_by_default() {
    let out = gmacwt(&["jam"], MIXED);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["branch"], "interior_root");
}

#[test]
fn input_and_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ch.json");
    let output = dir.path().join("sweep.csv");
    std::fs::write(&input, MIXED).unwrap();
    let out = gmacwt(
        &[
            "sweep",
            "--kind",
            "jam",
            "-i",
            input.to_str().unwrap(),
            "-o",
            output.to_str().unwrap(),
        ],
        "",
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&output).unwrap();
    assert_eq!(csv.lines().count(), 102);
}

#[test]
fn validation_errors_exit_1() {
    let out = gmacwt(
        &["maxsum"],
        r#"{"users": [{"gain_receiver": 1, "gain_eavesdropper": -1, "power_max": 1}],
            "noise_var_receiver": 1, "noise_var_eavesdropper": 1}"#,
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("users[0].gain_eavesdropper"),
        "{}",
        stderr(&out)
    );
    assert!(out.stdout.is_empty());

    let out = gmacwt(&["maxsum", "-i", "/nonexistent/channel.json"], "");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("/nonexistent/channel.json"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(gmacwt(&["frobnicate"], "").status.code(), Some(1));
    assert_eq!(gmacwt(&["sweep"], "").status.code(), Some(1));
    assert_eq!(gmacwt(&["--help"], "").status.code(), Some(0));
}

#[test]
fn verify_passes_with_exit_0() {
    let out = gmacwt(&["maxsum", "--verify"], MIXED);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("\"within_tolerance\": true"));
}
