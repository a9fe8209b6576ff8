//! The `frontal` binary: exit codes, determinism and the documented examples.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn frontal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frontal"))
        .args(args)
        .env_remove("FRONTAL_TOL")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn verdict<'a>(report: &'a Value, id: &str) -> &'a str {
    report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["id"] == id)
        .unwrap()["status"]
        .as_str()
        .unwrap()
}

#[test]
fn analyze_hypocycloid() {
    let out = frontal(&["analyze", "--family", "hypocycloid", "--param", "m=1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let k = r["total_absolute_curvature"]["value"].as_f64().unwrap();
    assert!((k - std::f64::consts::PI).abs() < 1e-8);
    assert_eq!(r["rotation_index"], "1/2");
    assert_eq!(r["cusp_count"], 3);
    assert_eq!(r["simplicity"], "simple");
    assert!(r["units"].as_str().unwrap().contains("radians"));
}

#[test]
fn analyze_eye_and_circle() {
    let r = json(&frontal(&["analyze", "--family", "eye", "--param", "a=1"]));
    assert_eq!(r["co_orientable"], true);
    for p in r["singular_points"].as_array().unwrap() {
        assert!((p["cusp_det"].as_f64().unwrap() + 36.0).abs() < 1e-6 * 36.0);
    }
    let r = json(&frontal(&["analyze", "--family", "circle"]));
    let k = r["total_absolute_curvature"]["value"].as_f64().unwrap();
    assert!((k - 2.0 * std::f64::consts::PI).abs() < 1e-8);
    assert_eq!(r["rotation_index"], "1");
}

#[test]
fn analyze_is_byte_identical() {
    let a = frontal(&["analyze", "--family", "hypocycloid", "--param", "m=2"]);
    let b = frontal(&["analyze", "--family", "hypocycloid", "--param", "m=2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_exit_codes() {
    let out = frontal(&["verify", "--family", "hypocycloid", "--param", "m=3"]);
    assert_eq!(out.status.code(), Some(0));
    let out = frontal(&["verify", "--family", "eye", "--param", "a=0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(verdict(&r, "A-bound"), "not-applicable");
    assert!(r["total_absolute_curvature"]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_small_corpus() {
    let dir = scratch("failures");
    let out = frontal(&[
        "verify",
        "--corpus",
        "n2",
        "--count",
        "6",
        "--seed",
        "7",
        "--failures-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    assert_eq!(r["count"], 6);
    assert_eq!(r["failures"].as_array().unwrap().len(), 0);
    assert_eq!(r["margins"]["A-bound"]["evaluated"], 6);
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        vec!["analyze", "--family", "nonesuch"],
        vec!["analyze", "--family", "hypocycloid", "--param", "m"],
        vec!["analyze", "--family", "circle", "--tol", "-1"],
        vec!["analyze", "/nonexistent/curve.json"],
        vec!["analyze"],
        vec!["verify", "--corpus", "n7"],
        vec!["generate", "--index", "1/3"],
        vec!["generate", "--dimension", "3", "--index", "1/2"],
        vec!["no-such-command"],
    ] {
        let out = frontal(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn malformed_spec_file_exits_2() {
    let path = scratch("bad.json");
    std::fs::write(
        &path,
        r#"{"dimension": 2, "backend": "family", "family": {"name": "circle"}, "extra": 1}"#,
    )
    .unwrap();
    assert_eq!(
        frontal(&["analyze", path.to_str().unwrap()]).status.code(),
        Some(2)
    );
    std::fs::write(
        &path,
        r#"{"dimension": 3, "backend": "family", "family": {"name": "circle"}}"#,
    )
    .unwrap();
    assert_eq!(
        frontal(&["analyze", path.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_frontal"))
        .args(["analyze", "--family", "circle"])
        .env("FRONTAL_TOL", "1e-7")
        .output()
        .unwrap();
    assert_eq!(json(&out)["tolerance"], 1e-7);
}

#[test]
fn generate_then_analyze() {
    for (index, expect) in [("1/2", 1.0), ("3/2", 3.0), ("-1/2", 1.0)] {
        let path = scratch(&format!("gen{}.json", index.replace('/', "_")));
        let out = frontal(&[
            "generate",
            "--index",
            index,
            "--seed",
            "4",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let r = json(&frontal(&["analyze", path.to_str().unwrap()]));
        let k = r["total_absolute_curvature"]["value"].as_f64().unwrap();
        assert!(
            (k - expect * std::f64::consts::PI).abs() < 1e-8,
            "{index}: {k}"
        );
        assert_eq!(r["rotation_index"], index);
    }
    let a = frontal(&["generate", "--dimension", "3", "--seed", "9"]);
    let b = frontal(&["generate", "--dimension", "3", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["dimension"], 3);
}

#[test]
fn render_figures() {
    for m in ["1", "2", "3"] {
        let path = scratch(&format!("hypocycloid{m}.svg"));
        let param = format!("m={m}");
        let out = frontal(&[
            "render",
            "--family",
            "hypocycloid",
            "--param",
            &param,
            "--svg",
            path.to_str().unwrap(),
            "--show-indicatrix",
        ]);
        assert_eq!(out.status.code(), Some(0));
        let svg = std::fs::read_to_string(&path).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
    let path = scratch("eye.svg");
    let out = frontal(&[
        "render",
        "--family",
        "eye",
        "--param",
        "a=1",
        "--svg",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn render_rejects_high_dimension() {
    let spec = scratch("r4.json");
    std::fs::write(
        &spec,
        r#"{"dimension": 4, "backend": "fourier", "fourier": {"coords": [
            {"cos": [1.0]}, {"sin": [1.0]}, {"cos": [0.0, 0.5]}, {"sin": [0.0, 0.5]}]}}"#,
    )
    .unwrap();
    let svg = scratch("r4.svg");
    let out = frontal(&[
        "render",
        spec.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--show-indicatrix",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
