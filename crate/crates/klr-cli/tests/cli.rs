use std::process::Command;

use klr_cli::{run, EXIT_ERROR, EXIT_OK};
use serde_json::Value;

fn klr(args: &[&str]) -> klr_cli::Exit {
    run(std::iter::once("klr").chain(args.iter().copied()), None)
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = klr(&a);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn binary_runs_and_reports_rank() {
    let out = Command::new(env!("CARGO_BIN_EXE_klr"))
        .args(["verify-rank", "--e", "3", "--charge", "0", "--n", "3", "--format", "json"])
        .env_remove("KLR_CACHE")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rank_total"], "6");
    assert_eq!(v["expected"], "6");
    assert_eq!(v["ok"], true);
}

#[test]
fn small_answers() {
    assert_eq!(klr(&["kleshchev", "--lambda", "3"]).stdout, "false\n");
    assert_eq!(klr(&["kleshchev", "--lambda", "2,1"]).stdout, "true\n");
    assert_eq!(klr(&["reduce", "--n", "1", "--expr", "e(0)*y(1)", "--mod"]).stdout, "0\n");
    assert_eq!(klr(&["reduce", "--expr", "e(1)", "--mod-lambda"]).stdout, "0\n");
    assert_eq!(klr(&["reduce", "--expr", "e(0)*y(1)"]).stdout, "e(0)*y(1)\n");
    assert_eq!(klr(&["min-degree", "--alpha", "a0+a1"]).stdout, "0\n");
    let v = json(&["gram", "--lambda", "2,1", "--n", "3"]);
    assert_eq!(v["entries"], serde_json::json!([["1", "0"], ["0", "0"]]));
    assert_eq!(v["rank"], "1");
}

#[test]
fn printed_normal_forms_parse_back() {
    let v = json(&["reduce", "--expr", "e(0,1)*psi(1)*y(2)*psi(1) + 3*e(1,0)*y(1)^2"]);
    let text = v["element"]["text"].as_str().unwrap().to_string();
    let again = json(&["reduce", "--expr", &text]);
    assert_eq!(again["element"], v["element"]);
}

#[test]
fn serialized_terms_rebuild_the_element() {
    use klr_core::affine_algebra::{AffineElement, Klr, TermRecord};
    use klr_core::quiver::QuiverData;

    let expr = "e(0,1,2)*psi(2)*psi(1)*y(3) - 5*e(1,0,2)*y(2)^2 + e(2,2,1)*psi(1)";
    let v = json(&["reduce", "--expr", expr]);
    let records: Vec<TermRecord> = serde_json::from_value(v["element"]["terms"].clone()).unwrap();
    let back = AffineElement::from_records(3, &records).unwrap();
    let klr = Klr::new(QuiverData::new(3).unwrap());
    let direct = klr_cli::expr::parse_for(expr, 3).unwrap().to_element(&klr, 3).unwrap();
    assert_eq!(back, direct);
}

#[test]
fn json_values_are_strings_or_booleans() {
    fn walk(v: &Value) {
        match v {
            Value::Number(_) => panic!("bare number in {v}"),
            Value::Array(xs) => xs.iter().for_each(walk),
            Value::Object(m) => m.values().for_each(walk),
            _ => {}
        }
    }
    walk(&json(&["--e", "2", "--charge", "0,1", "basis", "--n", "2"]));
    walk(&json(&["render", "--expr", "e(0,1)*psi(1)"]));
    walk(&json(&["graded-dim", "--n", "3"]));
}

#[test]
fn expansion_of_a_basis_element() {
    let out = json(&["--e", "3", "expand", "--expr", "e(0,1)", "--n", "2"]);
    assert_eq!(out["expansion"].as_array().unwrap().len(), 1);
    assert_eq!(out["expansion"][0]["coefficient"], "1");
}

#[test]
fn exit_codes() {
    assert_eq!(klr(&["--help"]).code, EXIT_OK);
    assert_eq!(klr(&["--version"]).code, EXIT_OK);
    assert_eq!(klr(&["bogus"]).code, EXIT_ERROR);
    assert_eq!(klr(&["reduce", "--n", "2", "--expr", "psi(5)"]).code, EXIT_ERROR);
    let bad = klr(&["reduce", "--n", "2", "--expr", "psi(1", "--format", "json"]);
    assert_eq!(bad.code, EXIT_ERROR);
    let v: Value = serde_json::from_str(&bad.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "input");
    assert!(v["error"]["message"].as_str().unwrap().contains("column 6"));
    assert_eq!(klr(&["expand", "--expr", "e(1,0)"]).stdout, "0\n");
    // a level-2 shape against a level-1 multicharge
    assert_eq!(klr(&["kleshchev", "--lambda", "1|1"]).code, EXIT_ERROR);
}

#[test]
fn cache_hits_give_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Some(dir.path().to_path_buf());
    let args = ["klr", "--e", "2", "--charge", "0,1", "--n", "3", "verify-rank", "--format", "json"];
    let cold = run(args, cache.clone());
    assert_eq!(cold.code, EXIT_OK);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let warm = run(args, cache);
    assert_eq!(cold, warm);
    let plain = run(args, None);
    assert_eq!(cold, plain);
}

#[test]
fn environment_cache_overrides_the_flag() {
    let flag = tempfile::tempdir().unwrap();
    let env = tempfile::tempdir().unwrap();
    let f = flag.path().to_str().unwrap();
    let out = run(["klr", "--n", "2", "--cache-dir", f, "verify-rank"], Some(env.path().to_path_buf()));
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(std::fs::read_dir(flag.path()).unwrap().count(), 0);
    assert!(std::fs::read_dir(env.path()).unwrap().count() > 0);
}
