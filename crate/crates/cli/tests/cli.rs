//! End-to-end tests of the binary: exit-code discipline and output
//! formats.

use std::process::{Command, Output};

const ACTIN: &str = "M3 M4 M6 M5 M7 M9 -M2 M1 M8";
const ACTIN_STRING: &str = "3 4 4 5 6 7 5 6 7 8 9 -3 -2 2 8 9";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ciliate")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn parse_echoes_canonical_form_and_legal_string() {
    let out = run(&["parse", ACTIN]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains(&format!("descriptor: {ACTIN}")));
    assert!(text.contains(&format!("legal-string: {ACTIN_STRING}")));
}

#[test]
fn parse_of_single_mds_gene_yields_empty_string() {
    let out = run(&["parse", "M1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("legal-string: \n"));
}

#[test]
fn duplicate_index_exits_two() {
    let out = run(&["parse", "M1 M1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate MDS index 1"));
}

#[test]
fn syntax_error_exits_two_with_position() {
    let out = run(&["parse", "M1 ??"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte 3"));
}

#[test]
fn assemble_simple_gene() {
    let out = run(&["assemble", "M1 M2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("success: true"));
    assert!(text.contains("steps: 1"));
}

#[test]
fn assemble_exhausted_limit_exits_three() {
    let out = run(&["assemble", "--max-states", "1", ACTIN]);
    assert_eq!(code(&out), 3);
}

#[test]
fn assemble_raw_legal_string() {
    let out = run(&["assemble", "--raw", "2 3 2 3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("reducible: true"));
}

#[test]
fn assemble_raw_rejects_illegal_string() {
    let out = run(&["assemble", "--raw", "2 3 2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn assemble_json_trace_replays() {
    let out = run(&["assemble", "--format", "json", ACTIN]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["success"], true);
    assert_eq!(v["initial"], ACTIN_STRING);
    // replay the serialized steps through the library and compare states
    let mut current = ciliate::LegalString::parse(ACTIN_STRING).unwrap();
    for step in v["steps"].as_array().unwrap() {
        let rules = ciliate::applicable_rules(&current);
        let positions: Vec<usize> = step["positions"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p.as_u64().unwrap() as usize)
            .collect();
        let rule = rules
            .iter()
            .find(|r| r.name() == step["rule"] && r.positions() == positions)
            .expect("serialized rule is applicable");
        let (next, _) = ciliate::apply_rule(&current, rule).unwrap();
        assert_eq!(next.to_string(), step["result"].as_str().unwrap());
        current = next;
    }
    assert!(current.is_empty());
}

#[test]
fn strategies_counts_both_orders() {
    let out = run(&["strategies", "--format", "json", "M1 M2 M3"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["count"], 2);
    assert_eq!(v["truncated"], false);
}

#[test]
fn random_is_reproducible() {
    let a = run(&["random", "--kappa", "7", "--seed", "11", "--count", "5"]);
    let b = run(&["random", "--kappa", "7", "--seed", "11", "--count", "5"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(code(&a), 0);
}

#[test]
fn random_output_is_a_valid_corpus() {
    let out = run(&["random", "--kappa", "6", "--seed", "3", "--count", "4", "--inversion-prob", "0.5"]);
    let dir = std::env::temp_dir().join("ciliate-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("corpus.txt");
    std::fs::write(&path, stdout(&out)).unwrap();
    let parsed = run(&["parse", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&parsed), 0);
    let assembled = run(&["assemble", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&assembled), 0);
}

#[test]
fn shipped_corpus_assembles() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/scrambled_genes.txt");
    let out = run(&["assemble", "--input", path]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("success: true"));
}

#[test]
fn verify_one_pointer_universe() {
    let out = run(&["verify", "--max-pointers", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("total=4"));
    assert!(text.contains("reducible=4"));
    assert!(text.contains("agreement"));
}

#[test]
fn verify_two_pointer_universe_json() {
    let out = run(&["verify", "--max-pointers", "2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["total"], 96);
    assert_eq!(v["reducible"], 96);
    assert_eq!(v["agreement"], true);
}

#[test]
fn verify_rejects_oversized_universe() {
    let out = run(&["verify", "--max-pointers", "9"]);
    assert_eq!(code(&out), 2);
}
