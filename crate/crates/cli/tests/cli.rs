use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use vknot::catalog::{run_check, K4_DIAGRAM};
use vknot::report::{abelian_report, fbc_report, quotient_report};
use vknot::{KnotId, Rep, Settings, Source};

fn vknot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vknot")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = vknot(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn text(args: &[&str]) -> String {
    let out = vknot(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn trivial_braid_gives_free_group_of_rank_two() {
    let v = json(&["group", "--braid", "", "--strands", "1", "--rep", "A"]);
    assert_eq!(v["simplified"]["generators"], serde_json::json!(["x1", "y"]));
    assert_eq!(v["simplified"]["relators"], serde_json::json!([]));
}

#[test]
fn hopf_group_has_three_generators_and_two_relators() {
    let v = json(&["group", "--knot", "HOPF", "--rep", "A"]);
    assert_eq!(v["simplified"]["generators"].as_array().unwrap().len(), 3);
    assert_eq!(v["simplified"]["relators"].as_array().unwrap().len(), 2);
}

#[test]
fn k1_simplifies_to_one_relator() {
    let v = json(&["group", "--knot", "K1"]);
    assert_eq!(v["simplified"]["generators"], serde_json::json!(["x", "y"]));
    assert_eq!(v["simplified"]["relators"].as_array().unwrap().len(), 1);
}

#[test]
fn lcs_output_matches_library() {
    let v = json(&["lcs", "--knot", "K2", "--class", "5"]);
    let lib = quotient_report(&Source::Knot(KnotId::K2), Rep::A, 5, 1000).unwrap();
    assert_eq!(v, serde_json::to_value(&lib).unwrap());
    assert_eq!(v["quotients"][3], serde_json::json!({"weight": 4, "freeRank": 2, "torsion": ["4"]}));
}

#[test]
fn fbc_output_matches_library() {
    let v = json(&["fbc", "--knot", "K1", "--stable", "x"]);
    let lib = fbc_report(&Source::Knot(KnotId::K1), Some("x"), 1000, 32).unwrap();
    assert_eq!(v, serde_json::to_value(&lib).unwrap());
    assert_eq!(v["decomposition"]["rank"], 3);
    assert_eq!(v["decomposition"]["verdict"]["kind"], "ResiduallyNilpotent");
}

#[test]
fn k4_fbc_reports_amalgam() {
    let v = json(&["fbc", "--knot", "K4"]);
    assert!(v["decomposition"].is_null());
    assert_eq!(v["amalgam"]["edgeFreeRank"], 2);
}

#[test]
fn abelianize_hopf_m() {
    let v = json(&["abelianize", "--knot", "HOPF", "--rep", "M"]);
    let lib = abelian_report(&Source::Knot(KnotId::Hopf), Rep::M).unwrap();
    assert_eq!(v, serde_json::to_value(&lib).unwrap());
    assert_eq!(v["invariants"], serde_json::json!({"freeRank": 4, "torsion": []}));
}

#[test]
fn compare_hopf_reports_distinct_abelianizations() {
    let out = text(&["compare", "--knot", "HOPF", "--rep", "A", "--other-rep", "M", "--text"]);
    assert!(out.contains("not isomorphic (distinct abelianizations)"), "{out}");
}

#[test]
fn verify_rep_passes() {
    for rep in ["A", "M"] {
        let v = json(&["verify-rep", "--strands", "4", "--rep", rep]);
        assert_eq!(v["passed"], true);
    }
}

#[test]
fn check_is_deterministic_and_matches_library() {
    let a = vknot(&["check"]);
    let b = vknot(&["check"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lib = run_check(&Settings::default());
    assert_eq!(serde_json::from_slice::<Value>(&a.stdout).unwrap(), serde_json::to_value(&lib).unwrap());
}

#[test]
fn diagram_file_input() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(K4_DIAGRAM.as_bytes()).unwrap();
    let v = json(&["abelianize", "--diagram", f.path().to_str().unwrap()]);
    assert_eq!(v["invariants"], serde_json::json!({"freeRank": 2, "torsion": []}));
}

#[test]
fn presentation_file_input() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(br#"{"generators": ["a", "b"], "relators": ["a^4", "b^6"]}"#).unwrap();
    let v = json(&["abelianize", "--presentation", f.path().to_str().unwrap()]);
    assert_eq!(v["invariants"], serde_json::json!({"freeRank": 0, "torsion": ["2", "12"]}));
}

#[test]
fn config_file_sets_class() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(b"class = 2\n").unwrap();
    let v = json(&["lcs", "--knot", "K1", "--config", f.path().to_str().unwrap()]);
    assert_eq!(v["class"], 2);
    assert_eq!(v["quotients"].as_array().unwrap().len(), 2);
}

#[test]
fn input_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["group", "--braid", "s7", "--strands", "2"],
        &["group", "--knot", "K9"],
        &["lcs", "--knot", "K1", "--class", "0"],
        &["fbc", "--knot", "HOPF"],
        &["group"],
        &["abelianize", "--diagram", "/nonexistent/diagram.json"],
    ];
    for args in cases {
        assert_eq!(vknot(args).status.code(), Some(2), "{args:?}");
    }
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(b"colour = 2\n").unwrap();
    assert_eq!(vknot(&["check", "--config", f.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn check_failure_exits_with_one() {
    // K2's congruence pair needs m = 5
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(b"m-max = 2\n").unwrap();
    let out = vknot(&["check", "--config", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
