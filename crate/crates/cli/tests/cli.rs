use std::process::{Command, Output};

use serde_json::Value;

fn bbverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bbverify")).args(args).output().expect("binary runs")
}

fn json_report(args: &[&str]) -> Value {
    let out = bbverify(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn passing_run_exits_zero_with_schema() {
    let report = json_report(&["--q", "3,4", "--suite", "field-tower,spread-partition"]);
    assert_eq!(report["version"], 1);
    assert_eq!(report["config"]["q"], serde_json::json!([3, 4]));
    let records = report["records"].as_array().unwrap();
    assert_eq!(records.len(), 4);
    for r in records {
        assert_eq!(r["status"], "pass");
        assert!(r["elapsed_ms"].is_null());
        for key in ["t1", "t0", "s1", "s0"] {
            assert!(r["tower"][key].is_u64());
        }
    }
}

#[test]
fn non_prime_power_is_a_usage_error() {
    let out = bbverify(&["--q", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("6 is not a prime power"));
}

#[test]
fn bad_arguments_are_usage_errors() {
    for args in [
        &["--q", "3", "--suite", "no-such-id"][..],
        &["--q", "3", "--mode", "fast"],
        &["--q", "3", "--mode", "auto,no-such-id=sampled"],
        &["--q", "3", "--primpoly", "3:0,1"],
        &["--q", "3", "--primpoly", "3"],
        &["--q", "17"],
        &["--q", "x"],
    ] {
        assert_eq!(bbverify(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn same_seed_gives_identical_reports() {
    let args = ["--q", "3", "--suite", "BB-Baer-3,thm:Ccapsi,lem:sect-conic", "--mode", "sampled", "--samples", "20", "--seed", "7"];
    let a = bbverify(&args);
    let b = bbverify(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = bbverify(&["--q", "3", "--suite", "BB-Baer-3,thm:Ccapsi,lem:sect-conic", "--mode", "sampled", "--samples", "20", "--seed", "7", "--jobs", "3"]);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn tightness_example_passes_at_q7() {
    let report = json_report(&["--q", "7", "--suite", "lem:nrc-extn-tight"]);
    assert_eq!(report["records"][0]["status"], "pass");
}

#[test]
fn mode_override_applies_per_checker() {
    let report = json_report(&["--q", "3", "--suite", "BB-Baer-2", "--mode", "auto,BB-Baer-2=sampled", "--samples", "5"]);
    assert_eq!(report["config"]["mode_overrides"]["BB-Baer-2"]["kind"], "sampled");
    assert_eq!(report["records"][0]["counts"]["sublines"], 5);
}

#[test]
fn primpoly_override_is_used() {
    let report = json_report(&["--q", "3", "--primpoly", "3:2,1", "--suite", "field-tower,spread-partition"]);
    for r in report["records"].as_array().unwrap() {
        assert_eq!(r["status"], "pass");
        assert_eq!(r["tower"]["t1"], 2);
        assert_eq!(r["tower"]["t0"], 1);
    }
}

#[test]
fn csv_and_text_formats() {
    let csv = bbverify(&["--q", "3", "--suite", "field-tower", "--format", "csv"]);
    let csv = String::from_utf8(csv.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "theorem_id,q,status,reason,counts,witnesses,elapsed_ms,t1,t0,s1,s0");
    assert!(lines.next().unwrap().starts_with("field-tower,3,pass,"));

    let text = bbverify(&["--q", "3", "--suite", "field-tower,lem:nrc-extn-tight", "--format", "text"]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("field-tower"));
    assert!(text.contains("skip  [the counterexample is defined for q=7 only]"));
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["3", "1", "0", "1"]));
}

#[test]
fn out_flag_writes_file_and_timing_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = bbverify(&["--q", "3", "--suite", "field-tower", "--timing", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(report["records"][0]["elapsed_ms"].is_u64());
}

#[test]
fn list_prints_every_checker() {
    let out = bbverify(&["--list"]);
    let ids: Vec<String> = String::from_utf8(out.stdout).unwrap().lines().map(String::from).collect();
    assert_eq!(ids.len(), 37);
    assert!(ids.iter().any(|i| i == "thm:Ccapsi"));
}

#[test]
fn report_matches_golden_file() {
    let out = bbverify(&["--q", "2,3", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/q2_q3_n20.json")).unwrap();
    assert!(out.stdout == golden, "report differs from tests/golden/q2_q3_n20.json");
}
