use assert_cmd::Command;
use serde_json::Value;

fn mfcft() -> Command {
    Command::cargo_bin("mfcft").unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = mfcft().args(args).output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().unwrap())
}

fn keys(v: &Value) -> Vec<&str> {
    v.as_object().unwrap().keys().map(String::as_str).collect()
}

#[test]
fn help_and_usage_errors() {
    mfcft().arg("--help").assert().code(0);
    mfcft().assert().code(2);
    mfcft().args(["fusion-table", "--d", "4"]).assert().code(2);
    mfcft().args(["fusion-table", "--d", "1"]).assert().code(2);
    mfcft().args(["verify", "--d", "3", "--suites", "nope"]).assert().code(2);
    let out = mfcft().args(["verify", "--d", "5", "--root-exponent", "10"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not coprime"));
    mfcft().args(["decompose", "--d", "5", "0:4", "0:2"]).assert().code(2);
    mfcft().args(["decompose", "--d", "5", "0:1"]).assert().code(2);
}

#[test]
fn fusion_table_schema() {
    let (v, code) = json(&["fusion-table", "--d", "3"]);
    assert_eq!(code, 0);
    assert_eq!(keys(&v), ["checks", "d", "root_exponent", "tables"]);
    assert_eq!(v["d"], 3);
    assert_eq!(v["root_exponent"], 1);
    let rows = v["tables"]["fusion"].as_array().unwrap();
    assert_eq!(rows.len(), 36);
    let row = &rows[0];
    assert_eq!(keys(row), ["product", "x", "y"]);
    assert_eq!(keys(&row["x"]), ["a", "lambda"]);
    assert_eq!(keys(&row["product"][0]), ["label", "multiplicity"]);

    let (v, _) = json(&["fusion-table", "--d", "3", "--side", "cft"]);
    let rows = v["tables"]["fusion"].as_array().unwrap();
    assert_eq!(rows.len(), 36);
    assert_eq!(keys(&rows[0]["x"]), ["l", "r"]);
}

#[test]
fn fusion_tables_have_matching_row_counts_d5() {
    for side in ["mf", "cft"] {
        let (v, code) = json(&["fusion-table", "--d", "5", "--side", side]);
        assert_eq!(code, 0);
        assert_eq!(v["tables"]["fusion"].as_array().unwrap().len(), 400);
    }
}

#[test]
fn decompose_example() {
    let (v, code) = json(&["decompose", "--d", "5", "0:1", "0:2"]);
    assert_eq!(code, 0);
    let dec = &v["tables"]["decomposition"];
    assert_eq!(dec["text"], "P̂_{1:1} ⊕ P̂_{0:3}");
    let labels: Vec<(i64, i64)> = dec["summands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["label"]["a"].as_i64().unwrap(), s["label"]["lambda"].as_i64().unwrap()))
        .collect();
    assert_eq!(labels, [(1, 1), (0, 3)]);
    assert_eq!(dec["certificate"]["certified"], true);
    let check = &v["checks"][0];
    assert_eq!(keys(check), ["detail", "name", "paper_ref", "status"]);
    assert_eq!(check["status"], "pass");
}

#[test]
fn verify_passes_and_markdown_renders() {
    let (v, code) = json(&["verify", "--d", "3"]);
    assert_eq!(code, 0);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 20);
    assert!(checks.iter().all(|c| c["status"] != "fail"));
    let out = mfcft().args(["verify", "--d", "3", "--suites", "cft,tl", "--format", "markdown"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| check | reference | status | detail |"));
    assert!(text.contains("tl.jw_vanishing"));
    assert!(!text.contains("core."));
}

#[test]
fn injected_fault_fails() {
    let out = mfcft().args(["verify", "--d", "3", "--suites", "core", "--inject-fault", "tensor-sign"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAILED core.factorisation"));
}

#[test]
fn compare_counts_products() {
    let (v, code) = json(&["compare", "--d", "5"]);
    assert_eq!(code, 0);
    let products = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "equivalence.products").unwrap();
    assert_eq!(products["detail"], "400 products agree");
    assert_eq!(v["tables"]["label_map"].as_array().unwrap().len(), 20);
}

#[test]
fn galois_root() {
    let (v, code) = json(&["verify", "--d", "5", "--root-exponent", "2", "--suites", "equivalence,cft"]);
    assert_eq!(code, 0);
    assert_eq!(v["root_exponent"], 2);
    let galois = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "equivalence.galois").unwrap();
    assert_eq!(galois["status"], "pass");
}
