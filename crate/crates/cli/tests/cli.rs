use serde_json::Value;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn plemelj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plemelj")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const REAL_SEGMENT: &str = r#"{"segments":[{"type":"line","start":[-3,0],"end":[0,0]},{"type":"line","start":[0,0],"end":[3,0]}],"crossing":1}"#;

const BENT: &str = r#"{"segments":[
  {"type":"line","start":[-2,0],"end":[-0.5,0.4]},
  {"type":"line","start":[-0.5,0.4],"end":[0,0]},
  {"type":"line","start":[0,0],"end":[0.5,0.4]},
  {"type":"line","start":[0.5,0.4],"end":[2,0]}],"crossing":2}"#;

fn tilted(phi: f64) -> String {
    let (c, sn) = (phi.cos(), phi.sin());
    format!(
        r#"{{"segments":[{{"type":"line","start":[{},{}],"end":[0,0]}},{{"type":"line","start":[0,0],"end":[{},{}]}}],"crossing":1}}"#,
        -2.0 * c,
        -2.0 * sn,
        2.0 * c,
        2.0 * sn
    )
}

fn complex(v: &Value) -> (f64, f64) {
    (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

fn report(dir: &Path, kernel: &str, function: &str, contour: &str, check: bool) -> (i32, Value) {
    let c = write(dir, "contour.json", contour);
    let out = dir.join("report.json");
    let mut args = vec!["functional", "--kernel", kernel, "--function", function, "--contour", s(&c), "--out", s(&out)];
    if check {
        args.push("--cross-check");
    }
    let o = plemelj(&args);
    let text = std::fs::read_to_string(&out).unwrap_or_else(|_| panic!("{}", String::from_utf8_lossy(&o.stderr)));
    (code(&o), serde_json::from_str(&text).unwrap())
}

#[test]
fn single_point_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("map.csv");
    let o = plemelj(&["domain-map", "--kernel", "I_plus", "--grid", "0:0:1,1:1:1", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "re,im,status,abs_value");
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[2], "converged");
    assert!((fields[3].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn domain_map_rows_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = plemelj(&["domain-map", "--kernel", "full_line", "--grid", "-2:2:9,-2:2:7", "--out", s(&out)]);
        assert_eq!(code(&o), 0);
        std::fs::read(&out).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 63);
    assert_eq!(rows[0][..2], ["-2.0000000000000000e0", "-2.0000000000000000e0"]);
    assert_eq!(rows[1][..2], ["-1.5000000000000000e0", "-2.0000000000000000e0"]);
    assert_eq!(rows[9][1], "-1.3333333333333335e0");
    for r in &rows {
        let (re, im): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        if re == 0.0 && im.abs() > 0.5 {
            assert_eq!(r[2], "diverged", "{r:?}");
            assert!(r[3].is_empty());
        }
        if im == 0.0 && re != 0.0 {
            assert_eq!(r[2], "converged", "{r:?}");
        }
    }
}

#[test]
fn custom_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = plemelj(&[
        "domain-map", "--kernel", "I_minus", "--grid", "-1:1:3,-1:1:3", "--out", s(&out), "--lambda-start", "0.1", "--lambda-steps", "9",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let status: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(status[1], "converged");
    assert_eq!(status[7], "diverged");
}

#[test]
fn symmetric_real_segment_gives_pi() {
    let dir = tempfile::tempdir().unwrap();
    let (c, r) = report(dir.path(), "I_plus", "gauss(0)", REAL_SEGMENT, true);
    assert_eq!(c, 0);
    let (re, im) = complex(&r["value"]);
    assert!((re - PI).abs() < 1e-10 && im.abs() < 1e-10);
    assert_eq!(r["cross_check"]["agree"], Value::Bool(true));
    assert_eq!(r["epsilon_trace"].as_array().unwrap().len(), 8);
}

#[test]
fn delta_on_bent_path_gives_two_pi() {
    let dir = tempfile::tempdir().unwrap();
    let (c, r) = report(dir.path(), "delta", "gauss(0)", BENT, false);
    assert_eq!(c, 0);
    let (re, im) = complex(&r["value"]);
    assert!((re - 2.0 * PI).abs() < 1e-10 && im.abs() < 1e-10);
    assert_eq!(r["cross_check"], Value::Null);
}

#[test]
fn tilted_segment_agrees_with_lambda_route() {
    let dir = tempfile::tempdir().unwrap();
    let (c, r) = report(dir.path(), "I_plus", "gauss(0.3)", &tilted(PI / 8.0), true);
    assert_eq!(c, 0);
    let cc = &r["cross_check"];
    assert_eq!(cc["agree"], Value::Bool(true));
    let (a, b) = (complex(&cc["lambda_route"]), complex(&cc["formula_route"]));
    let scale = a.0.hypot(a.1);
    assert!((a.0 - b.0).hypot(a.1 - b.1) <= 1e-5 * scale);
}

#[test]
fn report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", BENT);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = plemelj(&["functional", "--kernel", "I_minus", "--function", "poly_gauss(1,0.2)", "--contour", s(&c), "--out", s(&out)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(&out).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn domain_violation_names_segment() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(
        dir.path(),
        "c.json",
        r#"{"segments":[{"type":"line","start":[-1,-2],"end":[0,0]},{"type":"line","start":[0,0],"end":[1,-2]}],"crossing":1}"#,
    );
    let out = dir.path().join("r.json");
    let o = plemelj(&["functional", "--kernel", "I_plus", "--function", "gauss(0)", "--contour", s(&c), "--out", s(&out)]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("segment 0"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", REAL_SEGMENT);
    let broken = write(dir.path(), "broken.json", r#"{"segments":[{"type":"line","start":[0,0]}]}"#);
    let gapped = write(
        dir.path(),
        "gap.json",
        r#"{"segments":[{"type":"line","start":[-1,0],"end":[0,0]},{"type":"line","start":[0.5,0],"end":[1,0]}],"crossing":1}"#,
    );
    let out = dir.path().join("o");
    let o = s(&out);
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["verify", "--suite", "everything"],
        vec!["domain-map", "--kernel", "I_sideways", "--grid", "0:1:2,0:1:2", "--out", o],
        vec!["domain-map", "--kernel", "I_plus", "--grid", "0:1,0:1:2", "--out", o],
        vec!["domain-map", "--kernel", "I_plus", "--grid", "1:0:3,0:1:2", "--out", o],
        vec!["domain-map", "--kernel", "I_plus", "--grid", "0:1:2,0:1:2", "--out", o, "--lambda-start", "-1"],
        vec!["functional", "--kernel", "I_plus", "--function", "sinc", "--contour", s(&good), "--out", o],
        vec!["functional", "--kernel", "theta", "--function", "one", "--contour", s(&good), "--out", o],
        vec!["functional", "--kernel", "I_plus", "--function", "one", "--contour", s(&broken), "--out", o],
        vec!["functional", "--kernel", "I_plus", "--function", "one", "--contour", s(&gapped), "--out", o],
    ];
    for args in cases {
        assert_eq!(code(&plemelj(&args)), 2, "{args:?}");
    }
}

#[test]
fn missing_contour_file_is_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.json");
    let out = dir.path().join("o");
    let o = plemelj(&["functional", "--kernel", "I_plus", "--function", "one", "--contour", s(&missing), "--out", s(&out)]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_suites() {
    for suite in ["special", "plemelj", "tilted"] {
        let o = plemelj(&["verify", "--suite", suite]);
        let stdout = String::from_utf8_lossy(&o.stdout);
        assert_eq!(code(&o), 0, "{stdout}");
        assert!(stdout.lines().filter(|l| l.starts_with("PASS ")).count() >= 4);
        assert!(stdout.contains("measured") && stdout.contains("tol"));
        assert!(stdout.trim_end().ends_with("0 failed"));
    }
}
