use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use paratangent::format::{parse_sequence, FlatnessDocument};
use paratangent::Rational;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str], mode: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_paratangent"));
    cmd.args(args).current_dir(dir).env_remove("PARATANGENT_MODE");
    if let Some(mode) = mode {
        cmd.env("PARATANGENT_MODE", mode);
    }
    cmd.output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn help_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(dir.path(), &["--help"], None).status.code(), Some(0));
    assert_eq!(run(dir.path(), &[], None).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["fractal", "cantor"], None).status.code(), Some(2));
    assert_eq!(
        run(dir.path(), &["fractal", "cantor", "--depth", "0"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(dir.path(), &["fractal", "cantor", "--depth", "2", "--word", "1"], None)
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn mode_from_environment() {
    let dir = TempDir::new().unwrap();
    let exact = run(dir.path(), &["fractal", "cantor", "--depth", "1"], None);
    assert_eq!(stdout(&exact), "x1\n0\n1\n");
    let float = run(dir.path(), &["fractal", "cantor", "--depth", "1"], Some("float"));
    assert!(stdout(&float).starts_with("x1\n0.0000000000000000e0\n"));
    let flag_wins = run(
        dir.path(),
        &["--mode", "exact", "fractal", "cantor", "--depth", "1"],
        Some("float"),
    );
    assert_eq!(stdout(&flag_wins), "x1\n0\n1\n");
    assert_eq!(
        run(dir.path(), &["fractal", "koch", "--depth", "1"], Some("bogus"))
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn koch_needs_float_mode() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["fractal", "koch", "--depth", "2"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("float"));
    let out = run(
        dir.path(),
        &["--mode", "float", "fractal", "koch", "--depth", "2"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 1 + 16);
}

#[test]
fn spec_file_and_plot() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("ifs.json"),
        r#"{"n":1,"maps":[{"linear":["1/2"],"translation":["0"]},{"linear":["1/2"],"translation":["1/2"]}]}"#,
    )
    .unwrap();
    let out = run(
        dir.path(),
        &[
            "fractal", "--spec", "ifs.json", "--depth", "2", "--plot", "p.svg", "--out", "w.csv",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(
        fs::read_to_string(dir.path().join("w.csv")).unwrap(),
        "x1\n0\n1/3\n2/3\n1\n"
    );
    let svg = fs::read_to_string(dir.path().join("p.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 4);

    fs::write(
        dir.path().join("bad.json"),
        r#"{"n":1,"maps":[{"linear":["3"],"translation":["0"]}]}"#,
    )
    .unwrap();
    assert_eq!(
        run(dir.path(), &["fractal", "--spec", "bad.json", "--depth", "1"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(dir.path(), &["fractal", "--spec", "missing.json", "--depth", "1"], None)
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn auto_and_csv_bases() {
    let dir = TempDir::new().unwrap();
    let out = run(
        dir.path(),
        &["fractal", "menger", "--word", "1", "--base", "auto", "--iters", "3"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let loaded = parse_sequence::<Rational>(&stdout(&out)).unwrap();
    assert_eq!(loaded.sequence.len(), 3);
    assert_eq!(loaded.sequence.entries()[0].nodes.len(), 4);

    fs::write(dir.path().join("seq.json"), stdout(&out)).unwrap();
    assert_eq!(run(dir.path(), &["fullness", "seq.json"], None).status.code(), Some(0));

    fs::write(dir.path().join("base.csv"), "x1\n0\n1/3\n1\n").unwrap();
    let out = run(
        dir.path(),
        &[
            "fractal", "cantor", "--word", "2,1", "--base", "base.csv", "--iters", "2", "--degree", "2",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let loaded = parse_sequence::<Rational>(&stdout(&out)).unwrap();
    assert_eq!(loaded.d, 2);
    assert_eq!(
        run(dir.path(), &["fractal", "cantor", "--word", "3", "--iters", "2"], None)
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn flatness_values_file() {
    let dir = TempDir::new().unwrap();
    let out = run(
        dir.path(),
        &[
            "fractal", "cantor", "--word", "1", "--iters", "6", "--degree", "2", "--base", "auto",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    fs::write(dir.path().join("seq.json"), stdout(&out)).unwrap();
    let loaded = parse_sequence::<Rational>(&stdout(&out)).unwrap();
    let zeros: Vec<Vec<&str>> = loaded
        .sequence
        .entries()
        .iter()
        .map(|e| vec!["0"; e.nodes.len()])
        .collect();
    fs::write(dir.path().join("values.json"), serde_json::to_string(&zeros).unwrap()).unwrap();
    let out = run(
        dir.path(),
        &["flatness", "seq.json", "--p", "2", "--values", "values.json"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: FlatnessDocument = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc.verdict, "2-flat");

    fs::write(dir.path().join("short.json"), "[[\"0\"]]").unwrap();
    assert_eq!(
        run(
            dir.path(),
            &["flatness", "seq.json", "--p", "1", "--values", "short.json"],
            None
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(dir.path(), &["flatness", "seq.json", "--p", "1"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(
            dir.path(),
            &["flatness", "seq.json", "--p", "3", "--function", "x"],
            None
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(
            dir.path(),
            &["flatness", "seq.json", "--p", "1", "--function", "x +"],
            None
        )
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn float_mode_reports() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("sin.csv"),
        "x1,value\n0,0\n0.001,0.0009999998333333417\n0.002,0.0019999986666669332\n",
    )
    .unwrap();
    let out = run(
        dir.path(),
        &["--mode", "float", "jet", "sin.csv", "--degree", "2"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let slope: f64 = doc["coefficients"][1].as_str().unwrap().parse().unwrap();
    assert!((slope - 1.0).abs() < 1e-5);
}
