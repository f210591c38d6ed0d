use serde_json::{json, Value};
use tri_waring::cli::run;
use tri_waring::decomposer::verify_decomposition;
use tri_waring::{Field, UTMatrix};

fn waring(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("waring").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn waring_json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let (code, out, err) = waring(&full);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

#[test]
fn field_report() {
    let (code, v) = waring_json(&["field", "--q", "9"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"field": "3^2/1,0,1", "m": 2, "modulus": [1, 0, 1], "p": 3, "q": 9}));
}

#[test]
fn solve_two_solution_case() {
    let (code, v) = waring_json(&["solve", "--q", "7", "--k", "6", "--lambda", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 12);
    assert_eq!(v["class_count"], 2);
    assert_eq!(v["U_size"], 0);
    assert_eq!(v["solutions"][0], json!([0, 1]));
}

#[test]
fn classify_zero_sum() {
    let (code, v) = waring_json(&["classify", "--q", "13", "--k", "3", "--lambda", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["class_count"], 5);
    assert_eq!(v["U_size"], 1);
    assert_eq!(v["classes"][0], json!({"rep": [1, 4], "sig": [1, 12], "size": 9}));
}

#[test]
fn decompose_golden() {
    let (code, v) = waring_json(&["decompose", "--q", "13", "--k", "2", "--matrix", "1,1;2"]);
    assert_eq!(code, 0);
    assert_eq!(
        v,
        json!({
            "assignment": [[0, 1], [4, 5]],
            "k": 2,
            "mode": "strict",
            "parts": ["0,10;4", "1,0;5"],
            "target": "1,1;2",
            "verified": true
        })
    );
}

#[test]
fn decompose_parts_round_trip() {
    let f: Field = "13".parse().unwrap();
    for parts in ["2", "3"] {
        let (code, v) =
            waring_json(&["decompose", "--q", "13", "--k", "3", "--parts", parts, "--matrix", "5,7,1;0,2;9"]);
        assert_eq!(code, 0);
        let c: UTMatrix = v["target"].as_str().unwrap().parse().unwrap();
        let ms: Vec<UTMatrix> =
            v["parts"].as_array().unwrap().iter().map(|p| p.as_str().unwrap().parse().unwrap()).collect();
        assert_eq!(ms.len(), parts.parse::<usize>().unwrap());
        assert!(verify_decomposition(&f, &c, &ms, 3).unwrap());
    }
}

#[test]
fn decompose_failure_is_reported() {
    let (code, v) = waring_json(&["decompose", "--q", "3", "--k", "2", "--matrix", "0,1;0"]);
    assert_eq!(code, 1);
    assert_eq!(v["verified"], false);
    assert_eq!(v["failure"]["kind"], "InsufficientClasses");
    assert_eq!(v["failure"]["threshold"], "1048576");
}

#[test]
fn root_and_conjugate() {
    let (code, v) = waring_json(&["root", "--q", "13", "--k", "2", "--matrix", "1,1;4"]);
    assert_eq!(code, 0);
    assert_eq!(v["root"], "1,9;2");
    assert_eq!(v["method"], "distinct_diagonal");

    let (code, v) = waring_json(&[
        "conjugate", "--q", "3", "--matrix", "0,0,1,0;0,0,1;0,0;0", "--matrix", "0,1,0,0;0,0,0;0,1;0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"conjugate": false, "witness": null}));
}

#[test]
fn table_row() {
    let (code, v) = waring_json(&["table", "--row", "123", "--q", "13", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["plan"]["coloring"], json!([1, 2, 1]));
    assert_eq!(v["powers"], json!(["1,1,0;12,0;1", "12,0,0;1,1;12"]));
    assert_eq!(v["result"]["verified"], true);
}

#[test]
fn oracle_and_bound() {
    let (code, v) = waring_json(&["oracle", "--q", "3", "--k", "2", "--matrix", "0,1;0"]);
    assert_eq!(code, 0);
    assert_eq!(v["min"], 3);
    assert_eq!(v["parts"].as_array().unwrap().len(), 3);

    let (code, v) = waring_json(&["bound", "--q", "7", "--k", "2", "--m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["N"], 8);
    assert_eq!(v["ok"], true);
}

#[test]
fn oracle_csv_text_mode() {
    let (code, out, _) = waring(&["oracle", "--q", "3", "--k", "2", "--n", "2"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("matrix,min"));
    assert_eq!(lines.count(), 27);
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = waring(&["decompose", "--q", "13", "--k", "2"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    let (code, _, _) = waring(&["table", "--row", "1234|56:34", "--q", "13", "--k", "2"]);
    assert_eq!(code, 2);
    let (code, _, _) = waring(&["field", "--q", "6"]);
    assert_eq!(code, 2);
    let (code, out, _) = waring(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("decompose"));
}
