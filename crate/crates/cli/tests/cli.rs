use std::process::{Command, Output};

use serde_json::Value;

const Z2: &str = r#"{"vertices":["a","b"],"simplices":[["a","b"]],"flag_closure":true}"#;
const Z2_PRES: &str = r#"{"generators":["a","b"],"relators":["a b A B"]}"#;
const FREE_ABELIAN: &str = r#"{"kind":"free-abelian"}"#;

fn homfill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homfill")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = homfill(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn text(args: &[&str]) -> String {
    let out = homfill(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf8")
}

#[test]
fn check_c16_group_a() {
    let v = json(&["check-c16", "--builtin", "groupA", "--lambda", "1/6"]);
    assert_eq!(v["maxPiece"], 20);
    assert_eq!(v["relatorLengths"], serde_json::json!([145, 121]));
    assert_eq!(v["verdict"], true);
    assert_eq!(v["header"]["tool"], "homfill");
    assert!(v["header"]["inputs"]["builtin"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn superadd_closure_values() {
    let out = text(&["superadd-closure", "--values", "5,1,1"]);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# homfill "));
    assert_eq!(lines[1], "5,10,15");
    let v = json(&["superadd-closure", "--values", "5,1,1", "--format", "json"]);
    assert_eq!(v["closure"], serde_json::json!([5, 10, 15]));
}

#[test]
fn euler_of_ka() {
    assert_eq!(json(&["euler", "--builtin", "complexKA"])["eulerCharacteristic"], 1);
    let h = json(&["homology", "--builtin", "complexKA"]);
    assert_eq!(h["homology"]["betti"], serde_json::json!([1, 0, 0]));
    assert_eq!(h["acyclic"], true);
}

#[test]
fn invalid_input_exits_2() {
    let out = homfill(&["euler", "--builtin", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error invalid-input:"));
    assert_eq!(homfill(&["superadd-closure", "--values", "1,x"]).status.code(), Some(2));
    assert_eq!(homfill(&["euler", "--builtin", "complexKA", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(homfill(&["cube-path", "--flag", Z2, "--radius", "3", "--to", "a a"]).status.code(), Some(2));
    assert_eq!(homfill(&["check-c16"]).status.code(), Some(2));
}

#[test]
fn budget_exits_3() {
    let out = homfill(&["delta-ab", "--presentation", Z2_PRES, "--oracle", r#"{"kind":"free"}"#, "--n-max", "8", "--radius", "8", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error resource-budget:"));
}

#[test]
fn delta_ab_table_csv() {
    let out = text(&["delta-ab", "--presentation", Z2_PRES, "--oracle", FREE_ABELIAN, "--n-max", "6", "--radius", "6"]);
    let rows: Vec<&str> = out.lines().skip(2).collect();
    let values: Vec<&str> = rows.iter().map(|r| r.split(',').nth(1).unwrap()).collect();
    assert_eq!(values, ["0", "0", "0", "1", "1", "2"]);
}

#[test]
fn outputs_are_deterministic_across_jobs() {
    let args = |jobs: &'static str| -> Vec<&'static str> {
        vec!["fill-loop", "--flag", Z2, "--radius", "8", "--random", "6", "--length", "8", "--seed", "5", "--jobs", jobs]
    };
    let one = text(&args("1"));
    assert_eq!(one, text(&args("1")));
    assert_eq!(one, text(&args("4")));
    let v: Value = serde_json::from_str(&one).unwrap();
    assert_eq!(v["allBoundsHold"], true);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("homfill-cli-test-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    assert!(text(&["superadd-closure", "--values", "2,5", "--out", p]).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().nth(1), Some("2,5"));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn cube_commands() {
    let p = json(&["cube-path", "--flag", Z2, "--radius", "6", "--to", "a a b", "--all", "50"]);
    assert_eq!(p["distance"], 3);
    assert_eq!(p["normalCount"], 1);
    assert_eq!(p["path"]["cubes"][0]["dim"], 2);
    let f = json(&["fellow-travel", "--flag", Z2, "--radius", "7", "--w-prime", "a", "--w", "a b"]);
    assert_eq!(f["fellowTravel"]["hausdorff"], 1);
    let r = json(&["fellow-travel", "--flag", Z2, "--radius", "7", "--random", "20", "--seed", "1"]);
    assert_eq!(r["countsByType"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum::<u64>(), 20);
    let m = json(&["morse-links", "--flag", Z2, "--radius", "4"]);
    assert_eq!(m["fVectors"]["full"], serde_json::json!([4, 4]));
    let l = json(&["fill-loop", "--flag", Z2, "--radius", "8", "--loop", "a b A B"]);
    assert_eq!(l["twoCells"], 1);
    assert_eq!(l["boundsHold"], true);
    let b = json(&["cube-ball", "--flag", Z2, "--radius", "2", "--hyperplanes"]);
    assert_eq!(b["fVector"], serde_json::json!([13, 16, 4]));
}

#[test]
fn every_command_runs() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["homology", "--presentation", Z2_PRES],
        vec!["euler", "--flag", Z2],
        vec!["harea", "--presentation", Z2_PRES, "--oracle", FREE_ABELIAN, "--radius", "3", "--word", "a b A B", "--word", "a a b A A B"],
        vec!["delta-ab", "--presentation", Z2_PRES, "--oracle", FREE_ABELIAN, "--n-max", "4", "--radius", "4", "--format", "json"],
        vec!["fa-table", "--presentation", r#"{"generators":["a"],"relators":["a a a"]}"#, "--oracle", r#"{"kind":"cyclic","order":3}"#, "--n-max", "4", "--radius", "4", "--mode", "direct"],
        vec!["superadd-closure", "--values", "1,3,4"],
        vec!["check-flag", "--builtin", "complexF"],
        vec!["spherical-double", "--flag", Z2],
        vec!["raag-pres", "--flag", Z2],
        vec!["salvetti", "--flag", Z2],
        vec!["leary-pres", "--builtin", "complexF", "--s", "1,-2"],
        vec!["check-c16", "--builtin", "groupA"],
        vec!["builtin", "--builtin", "groupQ", "--m", "2"],
        vec!["cube-ball", "--flag", Z2, "--radius", "2"],
        vec!["cube-path", "--flag", Z2, "--radius", "5", "--to", "a b"],
        vec!["fellow-travel", "--flag", Z2, "--radius", "6", "--w-prime", "b", "--w", "b a"],
        vec!["morse-links", "--flag", Z2, "--radius", "3"],
        vec!["fill-loop", "--flag", Z2, "--radius", "6", "--loop", "a A"],
        vec!["h1-evidence", "--presentation", Z2_PRES, "--oracle", FREE_ABELIAN, "--radius", "3", "--max-len", "4"],
    ];
    assert_eq!(cases.len(), 19);
    for args in &cases {
        let out = homfill(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(out.stdout, homfill(args).stdout, "{args:?} is not deterministic");
    }
    let h = json(&["harea", "--presentation", Z2_PRES, "--oracle", FREE_ABELIAN, "--radius", "3", "--word", "a a b A A B"]);
    assert_eq!(h["certificates"][0]["cost"], 2);
}
