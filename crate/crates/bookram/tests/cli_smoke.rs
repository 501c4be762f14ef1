//! Drives the installed binary end to end through a shell-level lens.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bookram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bookram"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn verify_appendix_passes_every_entry() {
    let out = bookram(&["verify-appendix"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert_eq!(text.matches("PASS").count(), 28);
    assert!(!text.contains("FAIL"));
    assert!(text.contains("28 entries checked"));
}

#[test]
fn bounds_show_emits_matching_json() {
    let out = bookram(&["bounds", "show", "2", "13", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(value["lower"], 29);
    assert_eq!(value["upper"], 29);

    let human = bookram(&["bounds", "show", "2", "13"]);
    assert!(stdout_of(&human).contains("R(B_2,B_13) = 29"));
}

#[test]
fn check_flags_a_corrupted_witness() {
    let dir = tempfile::tempdir().unwrap();

    // Bundled 20-vertex matrix: passes at (2,8).
    let good = dir.path().join("good.txt");
    let paley = bookram(&["paley", "--q", "5"]);
    let graph6_line = stdout_of(&paley).lines().next().unwrap().to_string();
    fs::write(&good, format!("{graph6_line}\n")).unwrap();
    let out = bookram(&["check", "--graph", good.to_str().unwrap(), "--r", "2", "--s", "3"]);
    assert_eq!(out.status.code(), Some(0));

    // Adding one edge to K_{3,3} creates a B_1 on the graph side.
    let bad = dir.path().join("bad.txt");
    fs::write(
        &bad,
        "0 1 0 1 1 1\n1 0 0 1 1 1\n0 0 0 1 1 1\n1 1 1 0 0 0\n1 1 1 0 0 0\n1 1 1 0 0 0\n",
    )
    .unwrap();
    let out = bookram(&["check", "--graph", bad.to_str().unwrap(), "--r", "1", "--s", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("edge ("), "violating edge should be named");
}

#[test]
fn encode_sat_is_deterministic_across_processes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| -> (Vec<u8>, Vec<u8>) {
        let out_path = dir.path().join(name);
        let out = bookram(&[
            "encode-sat",
            "--n",
            "8",
            "--r",
            "2",
            "--s",
            "2",
            "--symmetry",
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let vars = format!("{}.vars", out_path.display());
        (fs::read(&out_path).unwrap(), fs::read(Path::new(&vars)).unwrap())
    };
    let (cnf_a, vars_a) = run("a.cnf");
    let (cnf_b, vars_b) = run("b.cnf");
    assert_eq!(cnf_a, cnf_b);
    assert_eq!(vars_a, vars_b);
    assert!(cnf_a.starts_with(b"p cnf "));
}

#[test]
fn enumerate_json_reports_the_known_count() {
    let out = bookram(&["enumerate", "--n", "6", "--r", "1", "--s", "2", "--json", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(value["count"], 4);
    assert_eq!(value["graphs"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bookram(&["enumerate", "--n", "6"]).status.code(), Some(2));
    assert_eq!(bookram(&["--no-such-flag"]).status.code(), Some(2));
}
