mod common;

use common::{bin, cases, check_case, run};
use serde_json::Value;

fn args(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn golden_outputs() {
    let failures: Vec<String> = cases()
        .iter()
        .filter_map(|(name, a)| check_case(name, a).err())
        .collect();
    assert!(failures.is_empty(), "{:#?}", failures);
}

#[test]
fn enumerate_123_gives_six_lines() {
    let out = run(&args(&["enumerate", "--partition", "(123)"]));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["support"], "(123)");
    }
}

#[test]
fn seed_does_not_change_enumeration() {
    let a = run(&args(&["enumerate", "--n", "4"]));
    let b = run(&args(&["enumerate", "--n", "4", "--seed", "99"]));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn stein_rank_reports_schema() {
    let out = run(&args(&["stein-rank", "--n", "4"]));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["quotient_dim"], 26);
    assert_eq!(v["rank"], 6);
}

#[test]
fn usage_errors_exit_two() {
    for a in [
        args(&["bogus"]),
        args(&["stein-rank"]),
        args(&["verify", "--n", "3", "--suite", "nope"]),
        args(&["render", "--n", "5"]),
        args(&["derive", "--forest", "[[1,2],3", "--point"]),
        args(&["derive", "--forest", "[[1,2],[3,4]]", "--point"]),
        args(&["enumerate", "--partition", "(12|23)"]),
    ] {
        let out = run(&a);
        assert_eq!(out.status.code(), Some(2), "{:?}", a);
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn out_dir_variable_places_files() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["render", "--n", "3", "--out", "plane.svg"])
        .env("STEINMANN_OUT_DIR", dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let svg = std::fs::read_to_string(dir.path().join("plane.svg")).unwrap();
    assert_eq!(svg.matches("<path ").count(), 6);

    let status = bin()
        .args(["verify", "--n", "2", "--json", "report.json"])
        .env("STEINMANN_OUT_DIR", dir.path())
        .stdout(std::process::Stdio::null())
        .status()
        .unwrap();
    assert!(status.success());
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["schema"], 1);
}

#[test]
fn replay_reports_reproduction() {
    let dir = tempfile::tempdir().unwrap();
    // the same forest twice does not sum to zero
    let bogus = r#"{"failures":[{"claim":"lie.antisymmetry","n":3,"counterexample":{
        "kind":"vanishing-sum",
        "forests":[{"source":"(123)","forest":"[[1,2],3]"},{"source":"(123)","forest":"[[1,2],3]"}],
        "shard":{"support":"(1|2|3)","signs":{}}}}]}"#;
    let genuine = bogus.replacen("[[1,2],3]", "[3,[1,2]]", 1);
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let out = run(&args(&[
        "verify",
        "--replay",
        &write("a.json", bogus),
        "--format",
        "text",
    ]));
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("REPRODUCED"));
    let out = run(&args(&["verify", "--replay", &write("b.json", &genuine)]));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn layerings_give_different_images() {
    let a = run(&args(&[
        "derive",
        "--forest",
        "[[1,2],[3,4]]@0,1,2",
        "--point",
    ]));
    let b = run(&args(&[
        "derive",
        "--forest",
        "[[1,2],[3,4]]@0,2,1",
        "--point",
    ]));
    assert!(a.status.success() && b.status.success());
    assert_ne!(a.stdout, b.stdout);
}
