#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_steinmann"))
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

fn input(name: &str) -> String {
    golden_dir()
        .join("inputs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub fn run(args: &[String]) -> Output {
    bin()
        .args(args)
        .env_remove("STEINMANN_OUT_DIR")
        .output()
        .expect("binary runs")
}

/// Golden file name and arguments for every recorded command.
pub fn cases() -> Vec<(&'static str, Vec<String>)> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        (
            "enumerate_123.jsonl",
            s(&["enumerate", "--partition", "(123)"]),
        ),
        (
            "enumerate_12_34.txt",
            s(&["enumerate", "--partition", "(12|34)", "--format", "text"]),
        ),
        ("enumerate_n4.jsonl", s(&["enumerate", "--n", "4"])),
        (
            "enumerate_n4_seed7.jsonl",
            s(&["enumerate", "--n", "4", "--seed", "7"]),
        ),
        (
            "enumerate_n4_oracle.txt",
            s(&["enumerate", "--n", "4", "--oracle", "--format", "text"]),
        ),
        ("stein_rank_n2.json", s(&["stein-rank", "--n", "2"])),
        ("stein_rank_n3.json", s(&["stein-rank", "--n", "3"])),
        ("stein_rank_n4.json", s(&["stein-rank", "--n", "4"])),
        (
            "stein_rank_n4.txt",
            s(&["stein-rank", "--n", "4", "--format", "text"]),
        ),
        (
            "oracle_upto8.txt",
            s(&["oracle", "--n", "8", "--upto", "--format", "text"]),
        ),
        ("oracle_n4.json", s(&["oracle", "--n", "4"])),
        (
            "derive_point_n3.json",
            s(&["derive", "--forest", "[[1,2],3]", "--point"]),
        ),
        (
            "derive_point_n4_a.json",
            s(&["derive", "--forest", "[[1,2],[3,4]]@0,1,2", "--point"]),
        ),
        (
            "derive_point_n4_b.json",
            s(&["derive", "--forest", "[[1,2],[3,4]]@0,2,1", "--point"]),
        ),
        (
            "derive_vector_n3.json",
            vec![
                "derive".into(),
                "--forest".into(),
                "[[1,2],3]".into(),
                "--vector".into(),
                input("vector_n3.json"),
            ],
        ),
        (
            "derive_shard_n4.json",
            s(&[
                "derive",
                "--forest",
                "[12,34]",
                "--shard",
                r#"{"support":"(12|34)","signs":{"1":"+","3":"-","13":"+","23":"-"}}"#,
            ]),
        ),
        (
            "derive_functional_n4.json",
            vec![
                "derive".into(),
                "--forest".into(),
                "[1,234]".into(),
                "--functional".into(),
                input("functional_n4.json"),
            ],
        ),
        (
            "derive_functional_n4_point.txt",
            vec![
                "derive".into(),
                "--forest".into(),
                "[[1,2],[3,4]]@0,2,1".into(),
                "--functional".into(),
                input("functional_n4.json"),
                "--format".into(),
                "text".into(),
            ],
        ),
        ("render_n3.svg", s(&["render", "--n", "3"])),
        (
            "render_n3_jacobi_term.svg",
            s(&["render", "--n", "3", "--forest", "[[1,2],3]"]),
        ),
        ("render_n4.svg", s(&["render", "--n", "4"])),
        (
            "render_n4_layering_a.svg",
            s(&["render", "--n", "4", "--forest", "[[1,2],[3,4]]@0,1,2"]),
        ),
        (
            "render_n4_layering_b.svg",
            s(&["render", "--n", "4", "--forest", "[[1,2],[3,4]]@0,2,1"]),
        ),
        (
            "verify_n3_lie.txt",
            s(&["verify", "--n", "3", "--suite", "lie", "--format", "text"]),
        ),
        (
            "verify_n4_all.txt",
            s(&["verify", "--n", "4", "--format", "text"]),
        ),
        ("verify_n2_all.json", s(&["verify", "--n", "2"])),
    ]
}

/// Runs a case twice; both runs must succeed and match each other and the
/// golden file. With `UPDATE_GOLDEN=1` the golden file is rewritten.
pub fn check_case(name: &str, args: &[String]) -> Result<(), String> {
    let first = run(args);
    let second = run(args);
    if !first.status.success() {
        return Err(format!(
            "{}: exit {:?}: {}",
            name,
            first.status.code(),
            String::from_utf8_lossy(&first.stderr)
        ));
    }
    if first.stdout != second.stdout {
        return Err(format!("{}: two runs differ", name));
    }
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &first.stdout).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read(&path).map_err(|e| format!("{}: {}", path.display(), e))?;
    if expected != first.stdout {
        return Err(format!("{}: output differs from the golden file", name));
    }
    Ok(())
}
