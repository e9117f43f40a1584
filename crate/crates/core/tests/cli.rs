use std::path::PathBuf;
use std::process::{Command, Output};

use lofeed::{ns_canonical, NetworkSpec};
use serde_json::Value;

fn lofeed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lofeed")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = lofeed(&[args, &["--format", "json"]].concat());
    let value = serde_json::from_slice(&out.stdout).expect("valid json");
    (out.status.code().unwrap(), value)
}

fn result<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["results"].as_array().unwrap().iter().find(|q| q["name"] == name).unwrap_or_else(|| panic!("{name}"))
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("lofeed-cli-{}-{name}", std::process::id()))
}

#[test]
fn ns_report_has_the_documented_shape() {
    let (code, v) = json(&["ns"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "ns");
    assert_eq!(v["provenance"]["seed"], 0);
    assert!(v["provenance"]["version"].is_string());
    assert!(v["inputs"].is_object());
    for q in v["results"].as_array().unwrap() {
        assert!(q["name"].is_string() && q["value"].is_number());
        if q.get("paper_value").is_some() {
            assert!(q["tolerance"].is_number() && q["pass"].is_boolean());
        }
    }
    let p = result(&v, "success_probability");
    assert!((p["value"].as_f64().unwrap() - 0.25).abs() <= 1e-12);
    assert_eq!(p["pass"], true);
}

#[test]
fn cutoff_widens_tables_without_moving_statistics() {
    let (_, two) = json(&["ns", "--cutoff", "2"]);
    let (_, three) = json(&["ns", "--cutoff", "3"]);
    let p = |v: &Value| result(v, "success_probability")["value"].as_f64().unwrap();
    assert_eq!(p(&two), p(&three));
    let (_, bounds2) = json(&["bounds", "--cutoff", "2"]);
    let (_, bounds3) = json(&["bounds", "--cutoff", "3"]);
    assert_eq!(bounds2["results"], bounds3["results"]);
}

#[test]
fn invalid_invocations_exit_with_two() {
    for args in [
        &["frobnicate"][..],
        &["ns", "--cutoff", "1"],
        &["ns", "--format", "xml"],
        &["ns", "--set", "bogus=1"],
        &["ns", "--set", "noequals"],
        &["correct", "--syndrome", "11"],
        &["chain", "--rounds", "3"],
        &["ns", "--network", "/nonexistent/network.txt"],
    ] {
        let out = lofeed(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn failed_check_exits_with_one() {
    let out = lofeed(&["bounds", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn csv_has_one_row_per_result() {
    let (_, v) = json(&["bounds"]);
    let out = lofeed(&["bounds", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,value,paper_value,tolerance,pass"));
    assert_eq!(lines.count(), v["results"].as_array().unwrap().len());
}

#[test]
fn out_file_receives_the_report() {
    let path = scratch("out.json");
    let out = lofeed(&["ns", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "ns");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn network_file_replaces_the_canonical_gate() {
    let same = scratch("canonical.txt");
    std::fs::write(&same, ns_canonical().to_text()).unwrap();
    let (code, v) = json(&["ns", "--network", same.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!((result(&v, "success_probability")["value"].as_f64().unwrap() - 0.25).abs() <= 1e-12);

    let other = scratch("other.txt");
    let net = NetworkSpec::new(3).unwrap().with_splitter(0, 1, 0.3).unwrap().with_splitter(1, 2, 1.1).unwrap();
    std::fs::write(&other, net.to_text()).unwrap();
    let (code, v) = json(&["bounds", "--network", other.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(v["results"].as_array().unwrap().iter().all(|q| q.get("paper_value").is_none()));

    let wide = scratch("wide.txt");
    std::fs::write(&wide, NetworkSpec::new(4).unwrap().to_text()).unwrap();
    assert_eq!(lofeed(&["ns", "--network", wide.to_str().unwrap()]).status.code(), Some(2));
    for p in [same, other, wide] {
        std::fs::remove_file(p).unwrap();
    }
}

#[test]
fn seeded_correction_is_reproducible() {
    let args = ["correct", "--syndrome", "00", "--restarts", "1", "--seed", "7"];
    let (c1, a) = json(&args);
    let (c2, b) = json(&args);
    assert_eq!(c1, c2);
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["provenance"]["seed"], 7);
}
