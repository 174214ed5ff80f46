use std::process::Command;

use cubeprog::render;
use cubeprog_core::arith::{parse_rational, QuadElem};
use num_bigint::BigInt;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cubeprog"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, out, _) = run(&all);
    (code, serde_json::from_str(&out).expect("valid JSON"))
}

#[test]
fn classify_examples() {
    let (code, v) = json(&["classify", "-7"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "exists");
    assert_eq!(v["witness"]["point"]["x"], "7");
    assert!(v["criteria"].as_array().unwrap().iter().any(|c| c["tag"] == "prime-3-mod-4"));

    let (code, v) = json(&["classify", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "not-exists");

    let (code, _, err) = run(&["classify", "12"]);
    assert_eq!(code, 2);
    assert!(err.contains("squarefree core is 3"), "{err}");
}

#[test]
fn classify_with_user_point() {
    let (code, v) = json(&["classify", "2", "--point", "10", "28"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness_source"], "user");
    assert_eq!(v["status"], "exists");
    let (code, _, err) = run(&["classify", "2", "--point", "6", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("finite order 2"), "{err}");
    // a point of infinite order contradicts a negative verdict
    let (code, _, err) = run(&["classify", "5", "--point", "10", "28"]);
    assert_eq!(code, 2, "off-curve input is a user error: {err}");
}

#[test]
fn ad_examples() {
    let (code, v) = json(&["ad", "5"]);
    assert_eq!((code, v["value"].as_str()), (0, Some("2")));
    let (code, v) = json(&["ad", "7", "--verbose"]);
    assert_eq!((code, v["value"].as_str()), (0, Some("0")));
    assert_eq!(v["solutions"].as_array().unwrap().len(), 0);
    let (code, _, err) = run(&["ad", "6"]);
    assert_eq!(code, 2);
    assert!(err.contains("coprime to 6"));
    let (code, _, _) = run(&["ad", "-5"]);
    assert_eq!(code, 2);
}

#[test]
fn torsion_examples() {
    let (code, v) = json(&["torsion", "-3"]);
    assert_eq!(code, 0);
    assert_eq!(v["invariants"], serde_json::json!(["2", "6"]));
    let (code, v) = json(&["torsion", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["structure"], "Z/2");
    assert_eq!(v["generators"][0]["point"]["x"], "3");
    let (code, _, _) = run(&["torsion", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn ap_examples_and_round_trip() {
    let (code, v) = json(&["ap", "2", "10", "28"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], "infinite");
    assert_eq!(v["progression"]["is_trivial"], false);
    let d = BigInt::from(2);
    let terms: Vec<QuadElem> = v["progression"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| QuadElem::parse(s.as_str().unwrap(), &d).unwrap())
        .collect();
    assert_eq!(terms[0], QuadElem::new(BigInt::from(36).into(), BigInt::from(28).into(), d.clone()).unwrap());
    assert_eq!(terms[1].to_string(), "60");
    let diff = QuadElem::parse(v["progression"]["common_difference"].as_str().unwrap(), &d).unwrap();
    assert_eq!(&terms[1].pow(3) - &terms[0].pow(3), diff);

    let (code, v) = json(&["ap", "2", "6", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], "2");
    assert_eq!(v["progression"]["is_trivial"], true);

    let (code, _, err) = run(&["ap", "2", "1", "1"]);
    assert_eq!(code, 2);
    assert!(err.ends_with("= 216\n"), "{err}");
}

#[test]
fn table_fractions_round_trip_through_json() {
    let (code, v) = json(&["verify-table"]);
    assert_eq!(code, 0);
    let row = v["rows"].as_array().unwrap().iter().find(|r| r["D"] == "23").unwrap();
    let x = parse_rational(row["point"]["x"].as_str().unwrap()).unwrap();
    assert_eq!(x, parse_rational("4655599441/56851600").unwrap());
}

#[test]
fn text_mode_renders_the_json_payload() {
    for args in [
        vec!["classify", "10"],
        vec!["ad", "13", "--verbose"],
        vec!["torsion", "-3"],
        vec!["ap", "-7", "7", "98"],
        vec!["search", "2", "20", "1"],
    ] {
        let (_, text, _) = run(&args);
        let (_, v) = json(&args);
        assert_eq!(text, render::text(&v), "{args:?}");
    }
}

#[test]
fn verify_table_is_deterministic_across_thread_counts() {
    let (c1, seq, _) = run_env(&["verify-table", "--json"], &[("CUBEPROG_THREADS", "0")]);
    let (c2, par, _) = run_env(&["verify-table", "--json"], &[("CUBEPROG_THREADS", "7")]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(seq, par);
    let (_, text, _) = run(&["verify-table"]);
    assert!(text.ends_with("18/18 rows passed\n"));
}

#[test]
fn verify_table_mutations_fail_at_the_right_check() {
    let dir = std::env::temp_dir().join(format!("cubeprog-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.csv");
    std::fs::write(&path, "D,x,y\n2,10,29\n2,6,0\n-7,7,98\n").unwrap();
    let (code, out, _) = run(&["verify-table", "--json", "--table", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    let failed: Vec<&str> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["failed_check"].as_str().unwrap_or("none"))
        .collect();
    assert_eq!(failed, vec!["on_curve", "infinite_order", "none"]);
    assert_eq!(v["rows"][1]["order"], "2");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn search_examples() {
    let (code, v) = json(&["search", "2", "20", "1"]);
    assert_eq!(code, 0);
    assert_eq!((v["point"]["x"].as_str(), v["point"]["y"].as_str()), (Some("10"), Some("28")));
    let (_, v) = json(&["search", "-6", "--height", "20", "--denom", "1"]);
    assert_eq!((v["point"]["x"].as_str(), v["point"]["y"].as_str()), (Some("9"), Some("81")));
    let (code, v) = json(&["search", "5", "100", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["found"], false);
    let (code, _, _) = run(&["search", "5", "0", "4"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["search", "4", "10", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn json_errors_carry_a_kind() {
    let (code, v) = json(&["torsion", "12"]);
    assert_eq!(code, 2);
    assert_eq!(v["kind"], "input");
}

#[test]
fn usage_errors_exit_with_two() {
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["ap", "2", "10"]);
    assert_eq!(code, 2);
}
