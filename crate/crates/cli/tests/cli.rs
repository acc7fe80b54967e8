use std::process::{Command, Output};

const WORKED: &str = "h1+ 1 v2- 2+ ; h2+ v1+ 1- 2";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_textile")).args(args).env_remove("TEXTILE_WORKERS").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn check_reports_cycles_as_json_and_sets_the_exit_code() {
    let out = run(&["check", WORKED]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["realizable", "vertices", "adjacencies", "cycles", "failure"]);
    assert_eq!(v["realizable"], true);
    assert_eq!(v["cycles"].as_array().unwrap().len(), 7);
    assert!(v["failure"].is_null());

    let out = run(&["check", "h1+ 1 2+ ; v1+ 1- 2"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["realizable"], false);
}

#[test]
fn malformed_input_exits_with_two() {
    let out = run(&["check", "h1+ 1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert_eq!(run(&["enumerate", "-n", "1", "-l", "0", "-m", "1"]).status.code(), Some(2));
}

#[test]
fn check_can_dump_the_graph() {
    let out = run(&["check", WORKED, "--dump-graph"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["graph"].as_array().unwrap().len(), 14);
}

#[test]
fn enumerate_counts_reduced_codes() {
    let out = run(&["enumerate", "-n", "2", "-l", "1", "-m", "1", "--stage", "reduced", "--count"]);
    assert_eq!(stdout(&out), "8\n");
    let out = run(&["enumerate", "-n", "1", "-l", "1", "-m", "1", "--count"]);
    assert_eq!(stdout(&out), "48\n");
}

#[test]
fn enumerate_emits_json_lines_and_csv() {
    let args = ["enumerate", "-n", "2", "-l", "1", "-m", "1", "--stage", "reduced"];
    let json = stdout(&run(&[&args[..], &["--format", "json"]].concat()));
    let lines: Vec<serde_json::Value> = json.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 8);
    assert!(lines.iter().all(|l| l["realizable"] == true && l["zenkina"].is_string()));
    let csv = stdout(&run(&[&args[..], &["--format", "csv"]].concat()));
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "code,complexity,realizable,r1,r2,n,k,x,y,zenkina");
    assert_eq!(rows.len(), 9);
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let args = ["enumerate", "-n", "2", "-l", "1", "-m", "1", "--stage", "realizable", "--format", "json"];
    let one = run(&[&args[..], &["--workers", "1"]].concat());
    let four = run(&[&args[..], &["--workers", "4"]].concat());
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn enumerate_writes_a_catalog_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.jsonl");
    let out =
        run(&["enumerate", "-n", "2", "-l", "1", "-m", "1", "--stage", "reduced", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().count(), 8);
}

#[test]
fn invariant_prints_the_normal_form_and_matches_up_to_units() {
    let out = run(&["invariant", "h1+ 1+ 2 v1+ 1 2+"]);
    assert_eq!(stdout(&out), "p^2*x*y + q*x + q*t*y - 1\n");
    let out = run(&["invariant", "h1+ 1 2+ 3 1- v1+ 3+ 2", "--match", "(q^2-p^2)*x*y - p*q*y - q*x + (1-q^2)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "-t\n");
    let out = run(&["invariant", "h1+ 1+ 2 v1+ 1 2+", "--match", "x"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "DISTINCT\n");
}

#[test]
fn symbol_and_homology() {
    assert_eq!(stdout(&run(&["symbol", "h1+ 1 2+ 3 1- v1+ 3+ 2"])), "3^1_(1,1)\n");
    assert_eq!(stdout(&run(&["homology", WORKED])), "(-1,1)\n(1,1)\n");
    let json = stdout(&run(&["--format", "json", "homology", "h1+ 1+ 2 v1+ 1 2+"]));
    assert_eq!(json, "{\"words\":[{\"x\":1,\"y\":1}],\"total\":{\"x\":1,\"y\":1}}\n");
}

#[test]
fn tables_exit_with_the_diff_verdict() {
    let out = run(&["tables", "redcodes"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 mismatches"));
    assert_eq!(run(&["tables", "allcodes"]).status.code(), Some(1));
    assert_eq!(run(&["tables", "nosuch"]).status.code(), Some(2));
}
