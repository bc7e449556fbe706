//! CLI contract tests: exit codes, flag validation, and cross-subcommand
//! consistency.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fpmine"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn db5_file(dir: &Path) -> PathBuf {
    let path = dir.join("db5.fimi");
    fs::write(&path, "0 1 2\n0 1\n0 2\n1 2\n0 1 2\n").unwrap();
    path
}

#[test]
fn mine_apriori_writes_six_itemsets_on_db5() {
    let dir = scratch("mine_db5");
    let input = db5_file(&dir);
    let output = dir.join("out.txt");
    let status = cli()
        .args([
            "mine",
            "--input",
            input.to_str().unwrap(),
            "--minsup",
            "0.6",
            "--output",
            output.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(&output).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.contains("0 1 #SUP: 3"));
}

#[test]
fn guided_output_is_subset_of_exact_output() {
    let dir = scratch("mine_subset");
    let input = db5_file(&dir);
    let exact = dir.join("exact.txt");
    let guided = dir.join("guided.txt");
    for (algo, out) in [("apriori", &exact), ("svm", &guided)] {
        let status = cli()
            .args([
                "mine",
                "--input",
                input.to_str().unwrap(),
                "--minsup",
                "0.6",
                "--algo",
                algo,
                "--train-fraction",
                "1.0",
                "--seed",
                "1",
                "--output",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0), "algo {algo}");
    }
    let exact_lines: std::collections::BTreeSet<String> = fs::read_to_string(&exact)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    for line in fs::read_to_string(&guided).unwrap().lines() {
        assert!(
            exact_lines.contains(line),
            "guided line {line:?} not in exact output"
        );
    }
}

#[test]
fn config_errors_exit_3() {
    let dir = scratch("cfg_err");
    let input = db5_file(&dir);
    let out = dir.join("x.txt");

    // minsup = 0 violates the positive-minsup requirement.
    let output = cli()
        .args([
            "mine",
            "--input",
            input.to_str().unwrap(),
            "--minsup",
            "0",
            "--output",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stderr).contains("minsup"));

    // Unknown flag: usage text, exit 3.
    let output = cli().args(["mine", "--bogus"]).output().unwrap();
    assert_eq!(output.status.code(), Some(3));

    // Unsorted noise levels.
    let status = cli()
        .args([
            "noise",
            "--input",
            input.to_str().unwrap(),
            "--minsup",
            "0.6",
            "--levels",
            "0,0.2,0.1",
            "--out-cells",
            dir.join("c.csv").to_str().unwrap(),
            "--out-summary",
            dir.join("s.csv").to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn input_errors_exit_2() {
    let dir = scratch("input_err");
    let out = dir.join("x.txt");

    // Missing file.
    let status = cli()
        .args([
            "mine",
            "--input",
            dir.join("missing.fimi").to_str().unwrap(),
            "--minsup",
            "0.5",
            "--output",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // Malformed token: error mentions the line.
    let bad = dir.join("bad.fimi");
    fs::write(&bad, "1 2\n3 x 4\n").unwrap();
    let output = cli()
        .args([
            "mine",
            "--input",
            bad.to_str().unwrap(),
            "--minsup",
            "0.5",
            "--output",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("line 2"));

    // Empty database.
    let empty = dir.join("empty.fimi");
    fs::write(&empty, "\n\n").unwrap();
    let status = cli()
        .args([
            "mine",
            "--input",
            empty.to_str().unwrap(),
            "--minsup",
            "0.5",
            "--output",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // Ragged CSV on convert, with the row index in the message.
    let ragged = dir.join("ragged.csv");
    fs::write(&ragged, "a,b\nc\n").unwrap();
    let output = cli()
        .args([
            "convert",
            "--input",
            ragged.to_str().unwrap(),
            "--output",
            dir.join("r.fimi").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("row 2"));
}

#[test]
fn convert_then_load_matches_direct_csv_load() {
    let dir = scratch("convert_roundtrip");
    let csv = dir.join("in.csv");
    fs::write(&csv, "e,x\np,x\ne,b\n").unwrap();
    let fimi = dir.join("out.fimi");
    let map = dir.join("out.items");
    let status = cli()
        .args([
            "convert",
            "--input",
            csv.to_str().unwrap(),
            "--output",
            fimi.to_str().unwrap(),
            "--map",
            map.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let direct = fpmine::txdb::load_categorical_csv(
        &fs::read_to_string(&csv).unwrap(),
        &fpmine::txdb::CsvConfig::default(),
    )
    .unwrap();
    let reloaded = fpmine::txdb::load_fimi(&fs::read_to_string(&fimi).unwrap()).unwrap();
    assert_eq!(reloaded.transactions(), direct.transactions());

    // The sidecar carries the labels the FIMI form drops.
    let map_text = fs::read_to_string(&map).unwrap();
    assert!(map_text.contains("0\tcol0=e"));
    assert_eq!(map_text.lines().count(), direct.n_items() as usize);
}

#[test]
fn curve_group_lengths_follow_model_structure() {
    let dir = scratch("curve_lengths");
    let input = db5_file(&dir);
    let output = dir.join("curve.csv");
    let status = cli()
        .args([
            "curve",
            "--input",
            input.to_str().unwrap(),
            "--minsup",
            "0.6",
            "--train-fraction",
            "1.0",
            "--seed",
            "1",
            "--n-trees",
            "7",
            "--max-depth",
            "4",
            "--output",
            output.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(&output).unwrap();
    let count = |model: &str| {
        text.lines()
            .filter(|l| l.starts_with(&format!("{model},")))
            .count()
    };
    assert_eq!(count("rf"), 7, "one snapshot per tree");
    assert_eq!(count("dt"), 4, "one snapshot per depth limit");
    assert_eq!(count("apriori"), count("fpgrowth"));
    assert!(count("svm") >= 1);
    // Exact miners are flat lines.
    let apriori_cells: std::collections::BTreeSet<&str> = text
        .lines()
        .filter(|l| l.starts_with("apriori,"))
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(apriori_cells.len(), 1, "exact-miner confidence is constant");
}

#[test]
fn mine_extracts_rules_on_request() {
    let dir = scratch("mine_rules");
    let input = db5_file(&dir);
    let itemsets = dir.join("sets.txt");
    let rules = dir.join("rules.csv");
    let status = cli()
        .args([
            "mine",
            "--input",
            input.to_str().unwrap(),
            "--minsup",
            "0.6",
            "--minconf",
            "0.7",
            "--output",
            itemsets.to_str().unwrap(),
            "--rules-output",
            rules.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(&rules).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "antecedent,consequent,support,confidence,lift"
    );
    // The three frequent pairs of DB5 each yield two rules at conf 0.75.
    assert_eq!(lines.count(), 6);
    assert!(text.contains("\"0\",\"1\",0.6,0.75,0.9375"));
}

#[test]
fn mine_accepts_csv_input_with_dropped_columns() {
    let dir = scratch("mine_csv");
    let csv = dir.join("cat.csv");
    // Column 0 plays the role of a class column and is dropped; the
    // remaining two columns give four distinct items.
    fs::write(&csv, "p,x,s\ne,x,s\np,b,s\ne,x,t\n").unwrap();
    let output = dir.join("out.txt");
    let status = cli()
        .args([
            "mine",
            "--input",
            csv.to_str().unwrap(),
            "--format",
            "csv",
            "--drop-columns",
            "0",
            "--minsup",
            "0.5",
            "--output",
            output.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(&output).unwrap();
    // col1=x and col2=s each appear in 3 of 4 rows, and co-occur in 2 of 4
    // (exactly at the inclusive threshold), so three itemsets come out.
    assert!(text.contains("#SUP: 3"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn json_reports_are_valid_json() {
    let dir = scratch("json_reports");
    let input = db5_file(&dir);
    let out = dir.join("o.txt");
    let output = cli()
        .args([
            "mine",
            "--input",
            input.to_str().unwrap(),
            "--minsup",
            "0.6",
            "--json",
            "--output",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let parsed: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("stdout is a JSON report");
    assert_eq!(parsed["command"], "mine");
    assert_eq!(parsed["n_itemsets"], 6);
}
