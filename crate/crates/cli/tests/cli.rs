use std::process::Command;

use serde_json::Value;

fn artinalg(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_artinalg"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8"),
    )
}

fn lines(s: &str) -> Vec<Value> {
    s.lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn temp_file(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("artinalg-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn g3_1_holds_on_cross() {
    let (code, out) = artinalg(&[
        "--fixture",
        "cross",
        "check",
        "--cond",
        "G",
        "--n",
        "3",
        "--k",
        "1",
        "--side",
        "algebra",
        "--json",
    ]);
    assert_eq!(code, 0);
    let rows = lines(&out);
    assert_eq!(rows[1]["verdict"], "holds");
    assert_eq!(rows.last().unwrap()["exit"], 0);
}

#[test]
fn algebra_file_and_module_file() {
    let alg = temp_file(
        "a3.alg",
        "field 3\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\n",
    );
    let m = temp_file("m.mod", "dim 1=1 2=1 3=0\nmatrix a\n1\n");
    let (code, out) = artinalg(&["--algebra", &alg, "grade", "--module", &m, "--json"]);
    assert_eq!(code, 0, "{out}");
    let rows = lines(&out);
    assert_eq!(rows[0]["config"]["p"], 3);
    assert_eq!(rows[1]["pd"], "1");
    let (code, out) = artinalg(&[
        "--algebra",
        &alg,
        "ext",
        "--module",
        "simple:2",
        "--degree",
        "1",
        "--with",
        "simple:3",
        "--json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(lines(&out)[2]["dim"], 1);
}

#[test]
fn malformed_algebra_is_a_usage_error() {
    let alg = temp_file("bad.alg", "field 2\nvertices 1 2\narrow a 1 -> 2\n");
    let (code, _) = artinalg(&["--algebra", &alg, "profile"]);
    assert_eq!(code, 2);
    let (code, _) = artinalg(&["profile"]);
    assert_eq!(code, 2);
    let (code, _) = artinalg(&["--fixture", "a3", "check", "--cond", "nonsense"]);
    assert_eq!(code, 2);
    let (code, _) = artinalg(&["--fixture", "a3", "--p", "4", "profile"]);
    assert_eq!(code, 2);
}

#[test]
fn bounded_enumeration_is_indeterminate() {
    let (code, out) = artinalg(&[
        "--fixture",
        "a3",
        "--dim-bound",
        "2",
        "cotorsion-verify",
        "--json",
    ]);
    assert_eq!(code, 3, "{out}");
}

#[test]
fn table_and_json_share_rows() {
    let (_, table) = artinalg(&["--fixture", "cyclic", "profile", "--depth", "2"]);
    let (_, json) = artinalg(&["--fixture", "cyclic", "profile", "--depth", "2", "--json"]);
    let rows = lines(&json);
    assert_eq!(table.lines().count(), rows.len() - 2 + 4);
    assert!(table.contains("Λ^op"));
}

#[test]
fn approx_with_trace() {
    let (code, out) = artinalg(&[
        "--fixture",
        "cyclic",
        "approx",
        "--kind",
        "cotorsion",
        "--i",
        "1",
        "--j",
        "2",
        "--side",
        "preenvelope",
        "--trace",
        "--json",
    ]);
    assert_eq!(code, 0);
    let rows = lines(&out);
    assert!(rows[1..rows.len() - 1]
        .iter()
        .all(|r| r["exact"] == true && r["trace"].is_array()));
}

#[test]
fn selftest_single_criterion() {
    let (code, out) = artinalg(&["selftest", "--criterion", "2", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(lines(&out)[1]["pass"], true);
    let (code, _) = artinalg(&["selftest", "--criterion", "11"]);
    assert_eq!(code, 2);
}
