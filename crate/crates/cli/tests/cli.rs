use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn homcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homcolor"))
        .args(args)
        .env_remove("HOMCOLOR_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses stdout as exactly one JSON object.
fn one_object(o: &Output) -> Value {
    let v: Value = serde_json::from_str(&stdout(o)).expect("stdout is one JSON value");
    assert!(v.is_object());
    v
}

#[test]
fn documented_examples() {
    let o = homcolor(&["oracle-f", "3", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "29");

    let o = homcolor(&["betti", "--hom", "cycle:5", "complete:3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "b0=2 b1=2");

    let o = homcolor(&[
        "bound",
        "--graph",
        "kneser:5,2",
        "--test",
        "complete:2",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v = one_object(&o);
    assert_eq!(v["bound"], 3);
    assert_eq!(v["h_G"], 1);
}

#[test]
fn every_subcommand_emits_one_object() {
    let cases: &[&[&str]] = &[
        &["hom", "cycle:5", "complete:3"],
        &["homplus", "cycle:5", "complete:3"],
        &["betti", "--ind", "cycle:6"],
        &["homology-int", "--hom", "complete:2", "complete:3"],
        &["height", "--test", "complete:2", "complete:4"],
        &["bound", "--graph", "cycle:5", "--test", "cycle:5"],
        &["fold", "path:4"],
        &["chromatic", "cycle:7"],
        &["winding", "5"],
        &["spectral", "complete:2", "complete:3"],
        &["oracle-f", "4", "5"],
        &["dump", "complete:2", "complete:2"],
    ];
    for args in cases {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let o = homcolor(&a);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        one_object(&o);
    }
}

#[test]
fn text_and_json_agree() {
    let args = ["bound", "--graph", "kneser:5,2", "--test", "complete:2"];
    let json = one_object(&homcolor(&[&args[..], &["--format", "json"]].concat()));
    let text = stdout(&homcolor(&args));
    for line in text.lines() {
        let (key, value) = line.split_once(": ").unwrap();
        let j = &json[key];
        if j.is_string() {
            assert_eq!(j.as_str().unwrap(), value, "{key}");
        } else {
            assert_eq!(*j, serde_json::from_str::<Value>(value).unwrap(), "{key}");
        }
    }
}

#[test]
fn cold_and_warm_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = [
        "bound",
        "--graph",
        "kneser:5,2",
        "--test",
        "cycle:5",
        "--format",
        "json",
        "--cache-dir",
        d,
    ];
    let cold = stdout(&homcolor(&args));
    let entries = fs::read_dir(dir.path()).unwrap().count();
    assert!(entries > 0);
    let warm = stdout(&homcolor(&args));
    assert_eq!(cold, warm);

    // corrupt every entry: the next run recomputes and heals them
    for e in fs::read_dir(dir.path()).unwrap() {
        fs::write(e.unwrap().path(), "garbage").unwrap();
    }
    assert_eq!(stdout(&homcolor(&args)), cold);
    for e in fs::read_dir(dir.path()).unwrap() {
        let text = fs::read_to_string(e.unwrap().path()).unwrap();
        assert!(serde_json::from_str::<Value>(&text).is_ok());
    }
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_homcolor"))
        .args(["bound", "--graph", "cycle:5", "--test", "complete:2"])
        .env("HOMCOLOR_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(fs::read_dir(dir.path()).unwrap().count() > 0);
}

#[test]
fn exit_codes() {
    assert_eq!(homcolor(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(homcolor(&["bound", "--graph", "cycle:5"]).status.code(), Some(1));
    assert_eq!(
        homcolor(&["hom", "cycle:5", "complete:3", "--cell-budget", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(homcolor(&["--help"]).status.code(), Some(0));
    assert_eq!(homcolor(&["--version"]).status.code(), Some(0));
    assert_eq!(homcolor(&["hom", "nosuch:3", "complete:3"]).status.code(), Some(1));

    let o = homcolor(&[
        "hom",
        "complete:2",
        "complete:5",
        "--cell-budget",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(one_object(&o)["partial"], true);

    let o = homcolor(&[
        "bound",
        "--graph",
        "kneser:5,2",
        "--test",
        "complete:2",
        "--bd-budget",
        "20",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v = one_object(&o);
    assert!(v["partial"].is_object());
    assert_eq!(v["bound"], 1);
}

#[test]
fn graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("c5.txt");
    fs::write(&good, "# five cycle\nn 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 4 0\n").unwrap();
    let o = homcolor(&["betti", "--hom", good.to_str().unwrap(), "complete:3"]);
    assert_eq!(stdout(&o).trim(), "b0=2 b1=2");

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "n 3\ne 0 1\ne 1 7\n").unwrap();
    let o = homcolor(&["fold", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn deterministic_output() {
    let args = ["height", "--test", "cycle:5", "kneser:5,2", "--format", "json"];
    assert_eq!(stdout(&homcolor(&args)), stdout(&homcolor(&args)));
}

#[test]
fn integer_homology_of_a_circle() {
    let o = homcolor(&["homology-int", "--hom", "complete:2", "complete:3"]);
    let text = stdout(&o);
    assert!(text.contains("H0 = Z\nH1 = Z"), "{text}");
}
