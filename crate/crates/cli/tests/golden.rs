//! Golden-file tests for every command path. Each case in
//! `golden/cases.txt` runs twice from `golden/inputs`; both runs must match
//! `golden/expected/<name>.txt` byte for byte. Set `UPDATE_GOLDEN=1` to
//! rewrite the expected files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_reflexa"))
        .args(args)
        .current_dir(golden_dir().join("inputs"))
        .env("REFLEXA_SEED", "7")
        .output()
        .expect("binary runs");
    format!(
        "exit {}\n--- stdout\n{}--- stderr\n{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    )
}

fn cases() -> Vec<(String, Vec<String>)> {
    fs::read_to_string(golden_dir().join("cases.txt"))
        .expect("cases file")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once('|').expect("name | args");
            (name.trim().to_string(), args.split_whitespace().map(String::from).collect())
        })
        .collect()
}

#[test]
fn golden() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let expected_dir = golden_dir().join("expected");
    fs::create_dir_all(&expected_dir).unwrap();
    let mut mismatches = Vec::new();
    for (name, args) in cases() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run(&args);
        assert_eq!(first, run(&args), "{name}: output differs between runs");
        let path = expected_dir.join(format!("{name}.txt"));
        if update {
            fs::write(&path, &first).unwrap();
            continue;
        }
        match fs::read_to_string(&path) {
            Ok(expected) if expected == first => {}
            Ok(expected) => mismatches.push(format!("{name}:\n--- expected\n{expected}\n--- got\n{first}")),
            Err(_) => mismatches.push(format!("{name}: missing {}", path.display())),
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn exit_code_follows_report() {
    let pass = run(&["bialg", "iso", "K[Z3]", "K^Z3", "--field", "GF:7"]);
    assert!(pass.starts_with("exit 0"));
    let fail = run(&["bialg", "iso", "K[Z2]", "K^Z2", "--field", "GF:2"]);
    assert!(fail.starts_with("exit 1"));
    assert!(fail.contains("reproduce: REFLEXA_SEED=7 reflexa bialg iso"));
}
