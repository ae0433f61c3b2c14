use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fankoszul")).args(args).env_remove("FANKOSZUL_CUTOFF").output().unwrap()
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"));
    p.to_string_lossy().into_owned()
}

fn golden_dir() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").to_string_lossy().into_owned()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = bin(&a);
    (out.status.code().unwrap(), serde_json::from_slice(&out.stdout).unwrap())
}

#[test]
fn dual_of_the_quadrant() {
    let (code, v) = json(&["fan", "dual", "--fan", &fixture("fx1")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["rays"], serde_json::json!([[1, 0], [0, 1]]));
}

#[test]
fn ic_table_of_the_square_cone() {
    let (code, v) = json(&["ic", "table", "--fan", &fixture("fx2")]);
    assert_eq!(code, 0);
    let rows = v["results"]["rows"].as_array().unwrap();
    let row = rows.iter().find(|r| r["sigma"] == "[]" && r["tau"] == "[0,1,2,3]").unwrap();
    assert_eq!(row["degrees"], serde_json::json!([-3, -1]));
    assert_eq!(row["multiplicities"], serde_json::json!([1, 1]));
}

#[test]
fn cech_pairs_on_the_quadrant() {
    let (code, v) = json(&["verify", "cech", "--fan", &fixture("fx1")]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 5);
}

#[test]
fn single_ic_sheaf() {
    let (code, v) = json(&["ic", "o", "--fan", "fx2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["rows"].as_array().unwrap().len(), 10);
}

#[test]
fn verdict_failures_exit_with_one() {
    let (code, v) = json(&["verify", "purity", "--fan", "fx3"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(bin(&["verify", "nonsense", "--fan", "fx1"]).status.code(), Some(2));
    assert_eq!(bin(&["fan", "faces"]).status.code(), Some(2));
    assert_eq!(bin(&["ic", "[7]", "--fan", "fx1"]).status.code(), Some(2));
    assert_eq!(bin(&["kappa", "A[0", "--fan", "fx1"]).status.code(), Some(2));
    assert_eq!(bin(&["fan", "faces", "--fan", "fx1", "--cutoff", "1"]).status.code(), Some(2));
    assert_eq!(bin(&["fan", "faces", "--fan", "/nonexistent/fan.json"]).status.code(), Some(2));
    let (code, v) = json(&["ic", "[9]", "--fan", "fx1"]);
    assert_eq!(code, 2);
    assert_eq!(v["kind"], "FaceNotInFan");
}

#[test]
fn malformed_document_is_a_usage_error() {
    let dir = std::env::temp_dir().join(format!("fankoszul-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("bad.json");
    std::fs::write(&p, "{\"ambient_rank\": 2}").unwrap();
    assert_eq!(bin(&["fan", "faces", "--fan", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn cutoff_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_fankoszul"))
        .args(["fan", "faces", "--fan", "fx3", "--format", "json"])
        .env("FANKOSZUL_CUTOFF", "20")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cutoff"], 20);
}

#[test]
fn reports_are_byte_identical() {
    for args in [["verify", "perversity", "--fan", "fx1"], ["kappa", "L<o>[1] + A{0}", "--fan", "fx1"]] {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let (x, y) = (bin(&a), bin(&a));
        assert_eq!(x.stdout, y.stdout);
    }
}

#[test]
fn golden_reports_match() {
    let g = golden_dir();
    let mut cases: Vec<Vec<&str>> = Vec::new();
    for f in ["fx1", "fx2", "fx3"] {
        for c in [
            &["fan", "dual"][..],
            &["fan", "faces"],
            &["ic", "table"],
            &["verify", "perversity"],
            &["verify", "purity"],
            &["verify", "cech"],
            &["verify", "homs"],
            &["verify", "truncation"],
            &["kappa", "A"],
        ] {
            let mut a = c.to_vec();
            a.extend(["--fan", f]);
            cases.push(a);
        }
    }
    for f in ["fx1", "fx3"] {
        cases.push(vec!["rings", "check", "--fan", f]);
    }
    for mut a in cases {
        a.extend(["--golden", &g]);
        let (_, v) = json(&a);
        let golden = v["verdicts"].as_array().unwrap().iter().find(|x| x["name"] == "golden").unwrap();
        assert_eq!(golden["pass"], true, "{a:?}");
    }
}

#[test]
fn text_reports_list_verdicts() {
    let out = bin(&["verify", "cech", "--fan", "fx3"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().any(|l| l == "PASS C([], [0]) acyclic"));
}
