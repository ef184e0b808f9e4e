use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dickson"))
        .args(args)
        .env_remove("DICKSON_MAX_BITS")
        .env_remove("DICKSON_MAX_STEPS")
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("not JSON: {l}: {e}")))
        .collect()
}

fn json(args: &[&str]) -> (i32, Vec<Value>) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    (out.status.code().unwrap(), records(&out))
}

fn result(recs: &[Value]) -> &Value {
    recs.iter().find(|r| r["record"] == "result").expect("a result record")
}

#[test]
fn bound_example() {
    let (code, recs) = json(&["bound", "--tau", "{2}", "--t", "1", "--f", "succ", "--method", "fast"]);
    assert_eq!(code, 0);
    assert_eq!(recs[0]["record"], "input");
    assert_eq!(result(&recs)["value"], "10");
}

#[test]
fn methods_agree_in_one_call() {
    let (code, recs) = json(&["bound", "--tau", "{1,1}", "--t", "2", "--method", "naive,min-strategy,fast"]);
    assert_eq!(code, 0);
    let rows = result(&recs)["results"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["value"] == rows[0]["value"]));
}

#[test]
fn malformed_type_is_a_usage_error() {
    let (code, recs) = json(&["bound", "--tau", "{2,}", "--t", "1"]);
    assert_eq!(code, 2);
    assert_eq!(recs[0]["error"], "UsageError");
    assert!(recs[0]["message"].as_str().unwrap().contains("{2,}"));
    let out = run(&["bound", "--tau", "{2,}", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("{2,}"));
}

#[test]
fn budget_errors_have_their_own_code() {
    let (code, recs) = json(&["bound", "--tau", "{3}", "--t", "3", "--method", "naive", "--max-steps", "1000"]);
    assert_eq!(code, 3);
    assert_eq!(recs.last().unwrap()["error"], "BudgetExceeded");
}

#[test]
fn environment_overrides_budget() {
    let out = Command::new(env!("CARGO_BIN_EXE_dickson"))
        .args(["bound", "--tau", "{3}", "--t", "3", "--method", "naive", "--format", "json"])
        .env("DICKSON_MAX_STEPS", "500")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(records(&out)[0]["max_steps"], 500);
}

#[test]
fn generate_lex_gives_the_eight_item_sequence() {
    let (code, recs) = json(&["generate-lex", "--k", "2", "--t", "1", "--f", "2*x"]);
    assert_eq!(code, 0);
    let items: Vec<&str> = result(&recs)["sequence"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(items, ["2: 1 1", "2: 1 0", "2: 0 5", "2: 0 4", "2: 0 3", "2: 0 2", "2: 0 1", "2: 0 0"]);
}

#[test]
fn oracle_example() {
    let (code, recs) = json(&["oracle", "--tau", "{1}", "--t", "2", "--f", "succ"]);
    assert_eq!(code, 0);
    let r = result(&recs);
    assert_eq!(r["length"], 3);
    assert_eq!(r["exhausted"], true);
    assert_eq!(r["witness_valid"], true);
}

#[test]
fn km_example() {
    let (code, recs) = json(&["km", &data("inc.vas")]);
    assert_eq!(code, 0);
    let r = result(&recs);
    assert_eq!(r["covering"], serde_json::json!(["<0>", "<ω>"]));
    assert_eq!(r["unbounded_coordinates"], serde_json::json!([1]));
    let (_, recs) = json(&["km", &data("dec.vas")]);
    assert_eq!(result(&recs)["max_branch_len"], 2);
    let (_, recs) = json(&["km", &data("second.vas")]);
    assert_eq!(result(&recs)["covering"], serde_json::json!(["<0,0>", "<0,ω>"]));
}

#[test]
fn ica_example() {
    let (code, recs) = json(&["ica", &data("dec_loop.ica"), "--bfs-cap", "6"]);
    assert_eq!(code, 0);
    let r = result(&recs);
    assert_eq!(r["rounds"], 2);
    assert_eq!(r["reach_min"], serde_json::json!(["(q, 0)"]));
    assert_eq!(r["bfs_agrees"], true);
}

#[test]
fn termination_examples() {
    let (code, recs) = json(&["terminate", &data("choice.prog"), "--ranks", &data("choice.ranks"), "--grid", "4"]);
    assert_eq!(code, 0);
    let r = result(&recs);
    assert_eq!(r["inits"], 25);
    assert_eq!(r["tuples_bad"], true);
    assert_eq!(r["bound_ok"], true);
    let (code, recs) = json(&["terminate", "builtin:choice", "--ranks", &data("only_a.ranks"), "--init", "2,3"]);
    assert_eq!(code, 4);
    assert_eq!(recs.last().unwrap()["error"], "CoverageGap");
    let (code, recs) = json(&["run-program", "builtin:lex:2", "--inputs", "2,2"]);
    assert_eq!(code, 0);
    assert_eq!(result(&recs)["longest_run"], 6);
}

#[test]
fn model_errors_carry_line_numbers() {
    let dir = std::env::temp_dir().join(format!("dickson-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.vas");
    std::fs::write(&bad, "k 2\ninit 0 0\ndelta 1\n").unwrap();
    let (code, recs) = json(&["km", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(recs.last().unwrap()["error"], "ModelParseError");
    assert!(recs.last().unwrap()["message"].as_str().unwrap().contains("line 3"));
    let (code, _) = json(&["km", dir.join("missing.vas").to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn sequence_commands() {
    let (code, recs) = json(&["decompose", &data("region.seq"), "--t", "96"]);
    assert_eq!(code, 0);
    assert_eq!(result(&recs)["decomposed_type"], "192 x {1}");
    let (code, recs) = json(&["analyze", &data("rbad.seq")]);
    assert_eq!(code, 0);
    assert_eq!(result(&recs)["least_r_bad"], 3);
    let (code, recs) = json(&["layer", &data("rbad.seq")]);
    assert_eq!(code, 0);
    assert_eq!(result(&recs)["r"], 3);
    // the uncontrolled check fails for t = 1 on the region example
    let (code, recs) = json(&["decompose", &data("region.seq"), "--t", "1"]);
    assert_eq!(code, 2);
    assert_eq!(recs.last().unwrap()["error"], "NotControlled");
}

#[test]
fn layer_then_collapse_restores_the_input() {
    let (_, recs) = json(&["layer", &data("rbad.seq")]);
    let layered: Vec<String> =
        result(&recs)["sequence"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
    let dir = std::env::temp_dir().join(format!("dickson-layer-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("layered.seq");
    std::fs::write(&file, layered.join("\n")).unwrap();
    let (code, recs) = json(&["layer", file.to_str().unwrap(), "--r", "3", "--collapse"]);
    assert_eq!(code, 0);
    let back: Vec<&str> = result(&recs)["sequence"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let original = std::fs::read_to_string(data("rbad.seq")).unwrap();
    assert_eq!(back, original.lines().collect::<Vec<_>>());
}

#[test]
fn verify_reports_per_suite() {
    let (code, recs) = json(&["verify", "--suite", "ordering"]);
    assert_eq!(code, 0);
    let r = result(&recs);
    assert_eq!(r["passed"], true);
    assert_eq!(r["suites"][0]["suite"], "ordering-laws");
    let (code, recs) = json(&["verify", "--suite", "no-such-suite"]);
    assert_eq!(code, 2);
    assert_eq!(recs.last().unwrap()["error"], "UsageError");
}

#[test]
fn structured_inputs_round_trip() {
    let calls: Vec<Vec<String>> = vec![
        vec!["bound".into(), "--tau".into(), "2 x {1}".into(), "--t".into(), "2".into()],
        vec!["oracle".into(), "--tau".into(), "{1,0}".into(), "--t".into(), "1".into(), "--r".into(), "2".into()],
        vec!["km".into(), data("second.vas")],
        vec!["ica".into(), data("dec_loop.ica")],
        vec!["terminate".into(), "builtin:choice".into(), "--ranks".into(), data("choice.ranks"), "--init".into(), "3,4".into()],
        vec!["lex".into(), "--k".into(), "2".into(), "--t".into(), "1".into(), "--f".into(), "2*x".into()],
    ];
    for call in calls {
        let args: Vec<&str> = call.iter().map(String::as_str).collect();
        let (code, first) = json(&args);
        assert_eq!(code, 0, "{call:?}");
        let canon: Vec<String> =
            first[0]["args"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
        let out = run(&canon.iter().map(String::as_str).collect::<Vec<_>>());
        let second = records(&out);
        assert_eq!(second[0]["args"], first[0]["args"], "{call:?}");
        assert_eq!(result(&second), result(&first), "{call:?}");
    }
}

#[test]
fn text_output_is_readable() {
    let out = run(&["bound", "--tau", "{2}", "--t", "1"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("fast: 10"), "{text}");
    let out = run(&["verify", "--list"]);
    assert!(String::from_utf8_lossy(&out.stdout).lines().any(|l| l == "sandwich"));
}
