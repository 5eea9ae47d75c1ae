use std::process::{Command, Output};

fn prodsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodsurf")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_constant_return_cobb_douglas() {
    let o = prodsurf(&["classify", "--family", "CobbDouglas", "--params", "A=1,k=0.4:0.6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let gk = v["properties"].as_array().unwrap().iter().find(|p| p["property"] == "vanishing_gk").unwrap();
    assert_eq!(gk["holds"], true);
    assert_eq!(v["schema_version"], "1");
}

#[test]
fn analyze_reports_domain_violation_with_exit_3() {
    let spec = r#"{"n": 2, "body": ["ln", ["add", ["var", 0], ["const", -5]]]}"#;
    let o = prodsurf(&["analyze", "--spec", spec, "--box", "0.5:2"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("domain violation at ["), "{err}");
}

#[test]
fn input_errors_exit_2() {
    for args in [
        vec!["verify", "--spec", "whatever.json"],
        vec!["analyze", "--spec", "/nonexistent/spec.json"],
        vec!["analyze", "--family", "Nope", "--params", "A=1"],
        vec!["classify", "--family", "CobbDouglas", "--params", "A=1,k=0.5"],
        vec!["classify", "--family", "cd", "--params", "A=1,k=0.5:0.5", "--box", "2:1"],
        vec!["analyze"],
        vec!["bogus"],
    ] {
        assert_eq!(prodsurf(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    let common = ["analyze", "--family", "Transcendental", "--params", "A=1.3,a=0.4:0.5,b=0.2:-0.1", "--points-per-axis", "3"];
    let json = prodsurf(&[&common[..], &["--format", "json"]].concat());
    let csv = prodsurf(&[&common[..], &["--format", "csv"]].concat());
    assert_eq!(json.status.code(), Some(0));
    let text = stdout(&json);
    let csv_text = stdout(&csv);
    let mut lines = csv_text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let csv_rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), csv_rows.len());
    for (row, line) in rows.iter().zip(csv_rows) {
        for (col, cell) in header.iter().zip(line.split(',')) {
            let j = &row[*col];
            if j.is_null() {
                assert_eq!(cell, "");
            } else {
                let parsed: f64 = cell.parse().unwrap();
                assert_eq!(j.as_f64().unwrap().to_bits(), parsed.to_bits(), "{col}");
                // and the literal itself appears verbatim in the JSON text
                assert!(text.contains(&format!("\"{col}\": {cell}")), "{col}: {cell}");
            }
        }
    }
}

#[test]
fn output_file_and_reruns_are_identical() {
    let dir = std::env::temp_dir();
    let a = dir.join(format!("prodsurf-cli-test-{}-a.json", std::process::id()));
    let b = dir.join(format!("prodsurf-cli-test-{}-b.json", std::process::id()));
    for path in [&a, &b] {
        let o = prodsurf(&["classify", "--family", "Spillman", "--params", "A=1,a=1:1", "--seed", "3", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let _ = std::fs::remove_file(a);
    let _ = std::fs::remove_file(b);
}

#[test]
fn spec_from_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let spec = r#"{"family": "CobbDouglas", "params": {"A": 1, "k": [0.5, 0.5]}}"#;
    let mut child = Command::new(env!("CARGO_BIN_EXE_prodsurf"))
        .args(["classify", "--spec", "-", "--format", "csv"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(spec.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("flat,true,")));
}

#[test]
fn verify_csv_lists_every_expectation() {
    let o = prodsurf(&["verify", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("fixture,property,expected"));
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(4) == Some("true")));
}

#[test]
fn impossible_tolerances_make_verify_fail() {
    let o = prodsurf(&["verify", "--tol-zero", "1e-300", "--tol-const", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAILED"));
}
