use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.toml"))
}

fn bcinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcinv"))
        .args(args)
        .env_remove("BCINV_PRECISION")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn split_gaussian_five() {
    let out = bcinv(&["split", "--field", &path("qi"), "--p", "5"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["g"], 2);
    assert_eq!(v["pairs"], serde_json::json!([[1, 1], [1, 1]]));
    assert_eq!(v["p_maximal"], true);
    assert_eq!(v["manifest"]["tool"], "bcinv");
    assert_eq!(v["manifest"]["precision"], 30);
}

#[test]
fn split_rationals() {
    let v = json_of(&bcinv(&["split", "--field", &path("q"), "--p", "7"]));
    assert_eq!(v["g"], 1);
    assert_eq!(v["pairs"], serde_json::json!([[1, 1]]));
}

#[test]
fn error_exit_codes() {
    let bad = bcinv(&["split", "--field", &path("bad_poly"), "--p", "5"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json_of(&bad)["error"]["kind"], "parse");
    assert!(String::from_utf8_lossy(&bad.stderr).contains("position"));

    let scope = bcinv(&["split", "--field", &path("octic_97"), "--p", "2"]);
    assert_eq!(scope.status.code(), Some(2));
    assert_eq!(json_of(&scope)["error"]["class"], "scope");

    let oracle = bcinv(&[
        "invariant",
        "--field",
        &path("q_cbrt2"),
        "--over-prime",
        "7",
    ]);
    assert_eq!(oracle.status.code(), Some(2));

    assert_eq!(bcinv(&["split", "--p", "5"]).status.code(), Some(1));
    assert_eq!(
        bcinv(&["zeta", "--field", &path("q"), "--s", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(bcinv(&["--help"]).status.code(), Some(0));
}

#[test]
fn equiv_verdicts() {
    let v = json_of(&bcinv(&[
        "equiv",
        "--field-a",
        &path("qi"),
        "--field-b",
        &path("eisenstein"),
        "--bound",
        "100",
    ]));
    assert_eq!(v["verdict"]["result"], "disagree");
    assert_eq!(v["verdict"]["p"], 5);
    assert_eq!(v["pipeline"]["consistent"], true);
    assert!(v.get("table").is_none());

    let t = json_of(&bcinv(&[
        "equiv",
        "--field-a",
        &path("q"),
        "--field-b",
        &path("qi"),
        "--bound",
        "5",
        "--dump-table",
    ]));
    assert_eq!(t["table"][2]["p"], 5);
    assert_eq!(t["table"][2]["components_b"], 2);
    assert_eq!(
        t["table"][2]["b"]["pairs"],
        serde_json::json!([[1, 1], [1, 1]])
    );

    let same = json_of(&bcinv(&[
        "equiv",
        "--field-a",
        &path("qi"),
        "--field-b",
        &path("qi"),
    ]));
    assert_eq!(same["verdict"]["result"], "agree_to_bound");
    assert_eq!(same["verdict"]["bound"], 1000);

    let shifted = json_of(&bcinv(&[
        "equiv",
        "--field-a",
        &path("qi"),
        "--field-b",
        &path("qi_shifted"),
        "--mode",
        "full",
    ]));
    assert_eq!(shifted["verdict"]["result"], "agree_to_bound");

    let octic = json_of(&bcinv(&[
        "equiv",
        "--field-a",
        &path("octic_97"),
        "--field-b",
        &path("octic_1552"),
        "--bound",
        "2000",
        "--certify",
    ]));
    assert_eq!(octic["verdict"]["result"], "agree_to_bound");
    assert_eq!(octic["verdict"]["skipped"], serde_json::json!([2]));
    assert_eq!(octic["certificates"]["a_in_b"]["status"], "no_root");
    assert_eq!(octic["certificates"]["b_in_a"]["status"], "no_root");
}

#[test]
fn report_sections() {
    let v = json_of(&bcinv(&[
        "report",
        "--field",
        &path("qi"),
        "--bound",
        "10",
        "--levels",
        "2",
    ]));
    assert_eq!(v["components"]["counts_by_label"]["Z[1/5]"], 2);
    assert_eq!(v["section_errors"], 0);
    let chains = v["chains"].as_array().unwrap();
    assert_eq!(chains.len(), 4);
    // the ramified prime falls back to the closed form
    assert_eq!(chains[0]["mode"], "formula");
    assert!(chains[0]["oracle_error"].is_object());

    let q = json_of(&bcinv(&["report", "--field", &path("q")]));
    for e in q["fingerprint"]["entries"].as_array().unwrap() {
        assert_eq!(e["g"], 1);
    }

    let flat = json_of(&bcinv(&[
        "report",
        "--field",
        &path("q_sqrt_m5"),
        "--levels",
        "0",
    ]));
    for c in flat["chains"].as_array().unwrap() {
        assert_eq!(c["h"].as_array().unwrap().len(), 1);
        assert!(c["ratios"].as_array().unwrap().is_empty());
    }

    let octic = json_of(&bcinv(&["report", "--field", &path("octic_97")]));
    assert_eq!(octic["zeta"]["error"]["kind"], "not_p_maximal");
    assert_eq!(octic["components"]["skipped"], serde_json::json!([2]));
}

#[test]
fn invariant_json_shape() {
    let v = json_of(&bcinv(&[
        "invariant",
        "--field",
        &path("q_sqrt_m5"),
        "--over-prime",
        "11",
        "--levels",
        "2",
        "--mode",
        "oracle",
    ]));
    assert_eq!(v["prime"], serde_json::json!({ "p": 11, "f": 2, "e": 1 }));
    assert_eq!(v["h"], serde_json::json!([2, 120, 14520]));
    assert_eq!(v["ratios"][0]["value"], "121");
    assert_eq!(v["label"], "Z[1/11]");
    assert_eq!(v["certified"], true);

    let golden = json_of(&bcinv(&[
        "invariant",
        "--field",
        &path("golden"),
        "--over-prime",
        "11",
    ]));
    assert_eq!(golden["certified"], false);
    assert!(!golden["discrepancies"].as_array().unwrap().is_empty());
}

#[test]
fn spectrum_components_and_classification() {
    let v = json_of(&bcinv(&[
        "spectrum",
        "--field",
        &path("qi"),
        "--bound",
        "5",
        "--list-components",
        "--classify",
        "c:0",
    ]));
    let labels: Vec<&str> = v["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["Z[1/2]", "Z[1/5]", "Z[1/5]"]);
    assert_eq!(v["classify"]["classification"]["class"], "second_maximal");
    assert_eq!(v["classify"]["closure"].as_array().unwrap().len(), 2);
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_bcinv"))
        .args(["zeta", "--field", &path("q"), "--bound", "100"])
        .env("BCINV_PRECISION", "12")
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["digits"], 12);
    assert_eq!(v["manifest"]["precision"], 12);
    let digits = v["value"]
        .as_str()
        .unwrap()
        .chars()
        .filter(char::is_ascii_digit)
        .count();
    assert!(digits <= 12);
}

#[test]
fn seed_and_jobs_do_not_change_results() {
    let (a, b) = (path("octic_97"), path("octic_1552"));
    let run = |extra: &[&str]| {
        let mut args = vec!["equiv", "--field-a", &a, "--field-b", &b, "--bound", "500"];
        args.extend(extra);
        let mut v = json_of(&bcinv(&args));
        v["manifest"] = Value::Null;
        v
    };
    let base = run(&[]);
    assert_eq!(base, run(&["--seed", "99"]));
    assert_eq!(base, run(&["--jobs", "3"]));
}
