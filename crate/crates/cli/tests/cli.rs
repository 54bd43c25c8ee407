use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimerstat"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn hexagon_probability() {
    let o = run(&["prob", "--edges", &data("hexagon3.json"), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "dimerstat/1");
    let row = &v["rows"][0];
    assert_eq!(row["exact"], "2/27 + (1/3)t - t^3");
    assert!((row["numeric"].as_f64().unwrap() - 0.1449).abs() < 1e-3);
    assert_eq!(row["method"], "plane-coupling");
}

#[test]
fn coupling_window_csv() {
    let o = run(&["couple", "--model", "lozenge", "--window", "5", "--format", "csv"]);
    let s = stdout(&o);
    assert!(s.starts_with("x,y,exact,re,im\n"));
    assert_eq!(s.lines().count(), 1 + 11 * 11);
    assert!(s.lines().any(|l| l.starts_with("0,0,1/3,")));
    assert!(s.lines().any(|l| l.starts_with("0,1,-1/3 + t,")));
}

#[test]
fn quadrature_column() {
    let o = run(&[
        "couple",
        "--model",
        "domino",
        "--window",
        "2",
        "--quadrature",
        "--tol",
        "1e-9",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for row in v["rows"].as_array().unwrap() {
        let d = (row["re"].as_f64().unwrap() - row["quad_re"].as_f64().unwrap()).abs()
            + (row["im"].as_f64().unwrap() - row["quad_im"].as_f64().unwrap()).abs();
        assert!(d < 1e-7, "{row}");
    }
}

#[test]
fn bernoulli_variance() {
    let o = run(&["variance", "--n", "1", "--exact", "--format", "csv"]);
    let s = stdout(&o);
    let row: Vec<&str> = s.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "1");
    assert_eq!(row[2], "2.0");
    assert_eq!(row[6], "2");
}

#[test]
fn counts_and_oracle() {
    let o = run(&["count", "--torus", "4", "4", "--format", "csv"]);
    assert!(stdout(&o).contains("lozenge,torus 4x4,417,four-determinants"));
    let o = run(&["count", "--geometry", &data("hexagon_region.txt"), "--format", "csv"]);
    assert!(stdout(&o).contains(",13,determinant"));
    let o = run(&["oracle", "--torus", "4", "4", "--edges", &data("torus_edge.json")]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("mismatch"));
    let o = run(&[
        "prob",
        "--edges",
        &data("torus_edge.json"),
        "--verify-oracle",
        "--format",
        "csv",
    ]);
    assert!(stdout(&o).contains(",torus-weighted,1/3,match"), "{}", stdout(&o));
}

#[test]
fn deterministic_output() {
    let args = [
        "correlate",
        "--edges",
        &data("domino_stacked.json"),
        "--step",
        "4",
        "0",
        "--steps",
        "3",
        "--format",
        "json",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn exit_codes() {
    let o = run(&["prob", "--edges", "/nonexistent.json"]);
    assert_eq!(o.status.code(), Some(1));
    let e: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"], "usage");
    assert_eq!(run(&["count", "--unknown"]).status.code(), Some(1));
    assert_eq!(run(&["--tol", "0", "variance", "--n", "3"]).status.code(), Some(1));
    let o = run(&["count", "--torus", "1", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let e: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"], "computation");
    let o = run(&["oracle", "--model", "domino", "--torus", "4", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(run(&["--help"]).status.success());
}
