//! Acceptance run: one PASS/FAIL line per criterion, each with its time
//! budget. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bbgeom::projective::enumerate_points;
use bbgeom::varieties::{QuadricForm, RationalCurve};
use bbgeom::{BruckBoseFrame, FElem, FieldTower, Level, Point};
use bbgeom_suite::{checker_ids, run_check, run_suite, CheckRecord, Mode, Status, SuiteConfig};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, Box<dyn Fn() -> Outcome>);

fn frame(q: u32) -> BruckBoseFrame {
    BruckBoseFrame::new(FieldTower::new(q).unwrap())
}

fn run(id: &str, frame: &BruckBoseFrame, mode: Mode) -> Result<CheckRecord, String> {
    let r = run_check(id, frame, mode).map_err(|e| format!("{id}: {e}"))?;
    match r.status {
        Status::Pass => Ok(r),
        Status::Fail => Err(format!("{id} q={} failed: {}", r.q, serde_json::to_string(&r.witnesses).unwrap())),
        Status::Skip => Err(format!("{id} q={} skipped: {}", r.q, r.reason.unwrap_or_default())),
    }
}

fn count(r: &CheckRecord, key: &str) -> u64 {
    r.counts.get(key).copied().unwrap_or(0)
}

fn expect(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn sampled(n: usize) -> Mode {
    Mode::Sampled { n, seed: 0 }
}

fn bedrock() -> Outcome {
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let fr = frame(q);
        let f = fr.tower();
        let tq = f.frobenius(f.tau(), 1);
        expect(f.mul(f.tau(), tq) == f.neg(f.t0()), || format!("q={q}: τ·τ^q ≠ −t0"))?;
        expect(f.add(f.tau(), tq) == f.t1(), || format!("q={q}: τ+τ^q ≠ t1"))?;
        let mut pts: Vec<Point> = fr.spread().iter().flat_map(|l| l.points(f, Level::Base)).collect();
        let total = pts.len();
        pts.sort();
        pts.dedup();
        expect(fr.spread().len() as u32 == q * q + 1, || format!("q={q}: spread size"))?;
        expect(total == pts.len() && pts.len() as u32 == q * q * q + q * q + q + 1, || format!("q={q}: spread does not partition Σ∞"))?;
        expect(fr.deltas().all(|d| &fr.spread_line_from_transversal(d) == fr.spread_line(d)), || format!("q={q}: constructions differ"))?;
        for id in ["field-tower", "spread-partition", "spread-constructions"] {
            run(id, &fr, Mode::default())?;
        }
    }
    Ok("q ∈ {2,3,4,5,7,8,9}".into())
}

fn plane_axioms() -> Outcome {
    for q in [3u64, 4] {
        let r = run("bb-plane-axioms", &frame(q as u32), Mode::Exhaustive)?;
        expect(count(&r, "points") == q.pow(4) && count(&r, "lines") == q.pow(4) + q * q, || format!("q={q}: counts {:?}", r.counts))?;
    }
    Ok("q ∈ {3,4} exhaustive".into())
}

fn census(q: u64) -> Outcome {
    let fr = frame(q as u32);
    let r = run("3-space-meets-ruled", &fr, Mode::Exhaustive)?;
    let surfaces = count(&r, "surfaces");
    let per = [(q * q - q) / 2, q + 1, (q * q + q) / 2, q * q * q + q * q, q.pow(4) - q * q];
    let keys = ["directrix", "directrix_and_one_generator", "directrix_and_two_generators", "conic_and_generator", "twisted_cubic"];
    expect(surfaces >= 5, || format!("only {surfaces} surfaces"))?;
    for (k, n) in keys.iter().zip(per) {
        expect(count(&r, k) == n * surfaces, || format!("q={q}: {k} = {} ≠ {}", count(&r, k), n * surfaces))?;
    }
    let tc = run("lem:tc-brs", &fr, Mode::Exhaustive)?;
    expect(count(&tc, "twisted_cubic_sections") == per[4] * count(&tc, "surfaces"), || format!("q={q}: twisted cubic sections {:?}", tc.counts))?;
    Ok(format!("q={q}: {surfaces} surfaces, per-surface counts {per:?}"))
}

fn ccapsi(q: u32) -> Outcome {
    let r = run("thm:Ccapsi", &frame(q), sampled(120))?;
    let kinds = [count(&r, "secant"), count(&r, "tangent"), count(&r, "exterior")];
    expect(kinds.iter().all(|&k| k > 0) && kinds.iter().sum::<u64>() >= 100, || format!("q={q}: {kinds:?}"))?;
    Ok(format!("q={q}: secant/tangent/exterior = {kinds:?}"))
}

fn pencil_meets_g() -> Outcome {
    for q in [3, 4, 5, 7] {
        let fr = frame(q);
        for id in ["adult-conic-g", "cor:PcorrPsigma"] {
            let r = run(id, &fr, Mode::default())?;
            expect(count(&r, "pencil_members") == 200 * (q as u64 + 1), || format!("{id} q={q}: {:?}", r.counts))?;
        }
    }
    Ok("q ∈ {3,4,5,7}, every t ∈ F_q ∪ {∞}".into())
}

fn nrc_extension() -> Outcome {
    for q in [8, 9, 11] {
        let r = run("lem:nrc-extn", &frame(q), sampled(100))?;
        expect(count(&r, "pairs") >= 100, || format!("q={q}: {:?}", r.counts))?;
    }
    // the q = 7 pair, checked directly: f = −x0x1 − x3² + x2x4 + x3x4
    let f = FieldTower::new(7).unwrap();
    let m1 = f.neg(FElem::ONE);
    let form = QuadricForm::from_terms(&f, &[(0, 1, m1), (3, 3, m1), (2, 4, FElem::ONE), (3, 4, FElem::ONE)]).unwrap();
    let moment = RationalCurve::moment(4, 4);
    expect(moment.points(&f, Level::Base).iter().all(|p| form.eval(&f, p.coords()).is_zero()), || "moment curve not on f over F_7".into())?;
    let p_tau = moment.point(&f, Some(f.tau()));
    let value = form.eval(&f, p_tau.coords());
    let t = f.tau();
    expect(!value.is_zero() && value == f.sub(f.pow(t, 7), t), || "f(P_τ) ≠ τ⁷ − τ".into())?;
    run("lem:nrc-extn-tight", &frame(7), Mode::Exhaustive)?;
    Ok("q ∈ {8,9,11} × 100 pairs; q=7 fails at P_τ".into())
}

fn specialness() -> Outcome {
    let mut notes = Vec::new();
    for q in [3, 4, 5] {
        let r = run("sec3-regulus-special", &frame(q), Mode::Exhaustive)?;
        expect(
            count(&r, "regulus_plane_sections") == count(&r, "expected_regulus_plane_sections") && count(&r, "reguli_met") == count(&r, "reguli"),
            || format!("(a) q={q}: {:?}", r.counts),
        )?;
    }
    notes.push("(a) q ∈ {3,4,5}".to_string());
    for q in [7, 8, 9] {
        let fr = frame(q);
        let t2 = run("thm-tgt-conic-T-2", &fr, sampled(200))?;
        let conv = run("conv-tgt", &fr, sampled(60))?;
        expect(count(&t2, "conics") >= 200 && count(&conv, "synthesized_cubics") >= 50, || format!("(b) q={q}: {:?} {:?}", t2.counts, conv.counts))?;
    }
    notes.push("(b) q ∈ {7,8,9}".into());
    for q in [8, 9, 11] {
        let fr = frame(q);
        let cases = ["case_tangent", "case_secant", "case_exterior"];
        let fwd = run("baby-not-T-part2", &fr, sampled(200))?;
        let conv = run("4nrc-is-baby-1", &fr, sampled(60))?;
        let total: u64 = cases.iter().map(|k| count(&fwd, k)).sum();
        let synth: u64 = cases.iter().map(|k| count(&conv, k)).sum();
        expect(total >= 200 && cases.iter().all(|k| count(&fwd, k) > 0) && synth >= 50, || format!("(c) q={q}: {:?} {:?}", fwd.counts, conv.counts))?;
    }
    notes.push("(c) q ∈ {8,9,11}".into());
    Ok(notes.join(", "))
}

fn partitions() -> Outcome {
    for q in [3u64, 4, 5] {
        let fr = frame(q as u32);
        let r = run("thm:partition", &fr, sampled(20))?;
        expect(count(&r, "triples") >= 20, || format!("q={q}: {:?}", r.counts))?;
        run("cor:tgt-baby", &fr, Mode::default())?;
        let expected = q * (q * q + 1);
        if q == 3 {
            let ab = run("adult-baby", &fr, Mode::Exhaustive)?;
            expect(count(&ab, "subconics") == 30, || format!("q=3: {:?}", ab.counts))?;
        } else {
            let ab = run("adult-baby", &fr, sampled(200))?;
            expect(count(&ab, "expected_subconics_by_double_count") == expected, || format!("q={q}: {:?}", ab.counts))?;
        }
    }
    Ok("q ∈ {3,4,5}; adult-baby 30 at q=3, 68 and 130 by double counting".into())
}

fn congruence() -> Outcome {
    for q in [3, 4, 5] {
        let fr = frame(q);
        let a = run("thm:Baerline-trans", &fr, Mode::Exhaustive)?;
        let b = run("cor:Baerplane-trans", &fr, Mode::Exhaustive)?;
        expect(count(&a, "sublines") >= 20 && count(&b, "subplanes") >= 20, || format!("q={q}: {:?} {:?}", a.counts, b.counts))?;
    }
    Ok("q ∈ {3,4,5}, all conjugate pairs".into())
}

fn determinism() -> Outcome {
    let config = SuiteConfig {
        towers: [2, 3].iter().map(|&q| FieldTower::new(q).unwrap()).collect(),
        ids: checker_ids().iter().map(|s| s.to_string()).collect(),
        mode: Mode::default(),
        mode_overrides: Vec::new(),
        jobs: 2,
        timing: false,
    };
    let a = serde_json::to_string(&run_suite(&config).map_err(|e| e.to_string())?).unwrap();
    let b = serde_json::to_string(&run_suite(&config).map_err(|e| e.to_string())?).unwrap();
    expect(a == b, || "reports differ".into())?;
    Ok(format!("full suite at q ∈ {{2,3}}, {} bytes", a.len()))
}

fn main() -> ExitCode {
    // keep points enumerable here so a broken build of the core fails fast
    assert_eq!(enumerate_points(&FieldTower::new(3).unwrap(), 4, Level::Base).unwrap().count(), 121);
    let min = |m: u64| Duration::from_secs(60 * m);
    let criteria: Vec<Criterion> = vec![
        (1, "field and frame bedrock", Duration::from_secs(5), Box::new(bedrock)),
        (2, "Bruck–Bose plane axioms", Duration::from_secs(30), Box::new(plane_axioms)),
        (3, "hyperplane census q=3", min(2), Box::new(|| census(3))),
        (3, "hyperplane census q=4", min(2), Box::new(|| census(4))),
        (3, "hyperplane census q=5", min(2), Box::new(|| census(5))),
        (4, "thm:Ccapsi q=3", min(2), Box::new(|| ccapsi(3))),
        (4, "thm:Ccapsi q=4", min(2), Box::new(|| ccapsi(4))),
        (4, "thm:Ccapsi q=5", min(2), Box::new(|| ccapsi(5))),
        (4, "thm:Ccapsi q=7", min(2), Box::new(|| ccapsi(7))),
        (5, "pencil members meet g", min(5), Box::new(pencil_meets_g)),
        (6, "lem:nrc-extn and tightness", min(1), Box::new(nrc_extension)),
        (7, "specialness equivalences", min(15), Box::new(specialness)),
        (8, "partition results", min(5), Box::new(partitions)),
        (9, "hyperbolic congruence", min(5), Box::new(congruence)),
        (10, "determinism", min(5), Box::new(determinism)),
    ];
    let mut failed = 0;
    for (n, name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if took <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {n:>2} {status}  {name}  [{:.1}s / {}s]  {detail}", took.as_secs_f64(), budget.as_secs());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion line(s) failed");
        ExitCode::FAILURE
    }
}
