use bbgeom::{BruckBoseFrame, FieldTower};
use bbgeom_suite::{checker_ids, run_check, CheckRecord, Mode, Status};

/// Every in-scope result anchor, plus the plumbing checks for the field,
/// spread and plane.
const ANCHORS: &[&str] = &[
    "3-space-meets-ruled",
    "lem:tc-brs",
    "ruled-extension-agreement",
    "BB-Baer-1",
    "BB-Baer-2",
    "BB-Baer-3",
    "BB-Baer-4",
    "BB-Baer-5",
    "cath-conic",
    "part-sec-conic",
    "res:circle",
    "lem:nrc-extn",
    "lem:nrc-extn-tight",
    "lemma-3-Baer",
    "thm:partition-intro",
    "cor:tgt-baby",
    "thm:partition",
    "sec3-regulus-special",
    "thm:Baerline-trans",
    "cor:Baerplane-trans",
    "adult-conic-g",
    "cor:PcorrPsigma",
    "thm:Ccapsi",
    "adult-conic-T",
    "adult-baby",
    "lem:sect-conic",
    "lem:sect-conic-converse",
    "thm-tgt-conic-T-1",
    "conv-tgt",
    "thm-tgt-conic-T-2",
    "smiley-conic",
    "4nrc-is-baby-1",
    "baby-not-T-part2",
];

fn frame(q: u32) -> BruckBoseFrame {
    BruckBoseFrame::new(FieldTower::new(q).unwrap())
}

#[test]
fn registry_covers_every_anchor() {
    let ids = checker_ids();
    for a in ANCHORS {
        assert!(ids.contains(a), "missing checker {a}");
    }
    for extra in ["field-tower", "spread-partition", "spread-constructions", "bb-plane-axioms"] {
        assert!(ids.contains(&extra));
    }
    let mut sorted = ids.to_vec();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), ids.len(), "duplicate ids");
    assert_eq!(ids.len(), ANCHORS.len() + 4);
}

#[test]
fn unknown_ids_are_errors() {
    assert!(run_check("thm:nope", &frame(3), Mode::default()).is_err());
}

#[test]
fn census_example_at_q3() {
    let r = run_check("3-space-meets-ruled", &frame(3), Mode::Exhaustive).unwrap();
    assert_eq!(r.status, Status::Pass);
    let s = r.counts["surfaces"];
    let got: Vec<u64> = ["directrix", "directrix_and_one_generator", "directrix_and_two_generators", "conic_and_generator", "twisted_cubic"]
        .iter()
        .map(|k| r.counts[*k] / s)
        .collect();
    assert_eq!(got, [3, 4, 6, 36, 72]);
}

#[test]
fn hypothesis_gaps_skip_with_reason() {
    let r = run_check("smiley-conic", &frame(5), Mode::default()).unwrap();
    assert_eq!(r.status, Status::Skip);
    assert_eq!(r.reason.as_deref(), Some("requires q>7"));
    assert_eq!(r.counts["observed_violations"], 0);
    let r = run_check("thm-tgt-conic-T-1", &frame(4), Mode::default()).unwrap();
    assert_eq!(r.reason.as_deref(), Some("requires q>5"));
    let r = run_check("lem:nrc-extn", &frame(7), Mode::default()).unwrap();
    assert_eq!(r.status, Status::Skip);
    // the tightness example is itself a violation below the bound
    assert_eq!(r.counts["observed_violations"], 1);
}

#[test]
fn tightness_example_at_q7() {
    let r = run_check("lem:nrc-extn-tight", &frame(7), Mode::Exhaustive).unwrap();
    assert_eq!(r.status, Status::Pass);
    let r = run_check("lem:nrc-extn-tight", &frame(5), Mode::Exhaustive).unwrap();
    assert_eq!(r.status, Status::Skip);
}

#[test]
fn exhaustive_mode_respects_scope() {
    let r = run_check("BB-Baer-3", &frame(3), Mode::Exhaustive).unwrap();
    assert_eq!(r.status, Status::Skip);
    assert_eq!(r.reason.as_deref(), Some("no exhaustive enumeration; use sampled mode"));
    let r = run_check("BB-Baer-2", &frame(4), Mode::Exhaustive).unwrap();
    assert_eq!(r.reason.as_deref(), Some("exhaustive enumeration is limited to q ≤ 3"));
}

#[test]
fn records_are_deterministic_per_seed() {
    let fr = frame(4);
    for id in ["thm:Ccapsi", "lem:sect-conic-converse", "BB-Baer-5", "thm:partition"] {
        // wall-clock time is the only field allowed to differ
        let run = || CheckRecord { elapsed_ms: None, ..run_check(id, &fr, Mode::Sampled { n: 30, seed: 11 }).unwrap() };
        let (a, b) = (run(), run());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap(), "{id}");
        assert_eq!(a.status, Status::Pass, "{id}");
    }
}

#[test]
fn every_checker_passes_or_skips_at_small_q() {
    for q in [2, 3, 4] {
        let fr = frame(q);
        for id in checker_ids() {
            let r = run_check(id, &fr, Mode::Auto { n: 40, seed: 1 }).unwrap();
            assert_ne!(r.status, Status::Fail, "{id} q={q}: {:?}", r.witnesses);
            if r.status == Status::Skip {
                assert!(r.reason.is_some());
            }
        }
    }
}
