use std::io::Write;
use std::process::{Command, Output, Stdio};

use simplex_forge::parse_off;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_simplex-forge"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn exit_codes_follow_status() {
    let ok = run(&["check"], r#"{"lengths":[3,4,5,6]}"#);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["status"], "ok");

    let infeasible = run(&["check"], r#"{"lengths":[1,2,3]}"#);
    assert_eq!(infeasible.status.code(), Some(2));
    assert_eq!(json(&infeasible)["status"], "infeasible");

    let realize_infeasible = run(&["realize"], r#"{"lengths":[1,1,1,3]}"#);
    assert_eq!(realize_infeasible.status.code(), Some(2));

    let broken = run(&["check"], r#"{"lengths":[3,4,"#);
    assert_eq!(broken.status.code(), Some(1));
    let v = json(&broken);
    assert_eq!(v["status"], "error");
    assert!(v["message"].as_str().unwrap().contains("line"));

    let invalid = run(&["realize"], r#"{"lengths":[1,-1,1]}"#);
    assert_eq!(invalid.status.code(), Some(1));
}

#[test]
fn command_mismatch_is_an_error() {
    let out = run(&["check"], r#"{"command":"realize","lengths":[1,1,1]}"#);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["message"].as_str().unwrap().contains("command"));
}

#[test]
fn flags_override_job_fields() {
    let out = run(&["random", "--dimension", "4", "--seed", "11"], "");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["payload"]["vertices"].as_array().unwrap().len(), 5);

    let out = run(
        &["realize", "--angles", "-1.0,0.5"],
        r#"{"lengths":[1,1,1,1,1]}"#,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let wrong_count = run(&["realize", "--angles", "1.0"], r#"{"lengths":[1,1,1,1,1]}"#);
    assert_eq!(wrong_count.status.code(), Some(1));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for (args, input) in [
        (vec!["realize", "--seed", "3"], r#"{"lengths":[1.0,1.4,2.0,2.2,2.5]}"#),
        (vec!["random", "--dimension", "5", "--seed", "99"], ""),
        (vec!["iterate"], r#"{"loop":[[1,1],[-1,0],[0,-1]]}"#),
    ] {
        let a = run(&args, input);
        let b = run(&args, input);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn off_output_reimports_with_facet_areas() {
    let lengths = [3.0, 4.0, 5.0, 6.0];
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.off");
    let out = run(
        &["realize", "--format", "off", "--output", path.to_str().unwrap()],
        r#"{"lengths":[3,4,5,6]}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let mesh = parse_off(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(mesh.vertices.len(), 4);
    assert_eq!(mesh.faces.len(), 4);
    // Face k is opposite vertex k, whose normal has length lengths[k].
    for (k, z) in lengths.iter().enumerate() {
        let area = mesh.face_area(k);
        assert!((area - z / 2.0).abs() <= 1e-8 * z, "face {k}: {area}");
    }
}

#[test]
fn input_file_and_facet_unit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    std::fs::write(&path, r#"{"command":"realize","lengths":[1,1,1,1],"unit":"facet"}"#).unwrap();
    let out = run(&["realize", "--input", path.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["diagnostics"]["max_length_error"].as_f64().unwrap() <= 1e-8);
}
