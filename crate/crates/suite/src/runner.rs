use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use bbgeom::{BruckBoseFrame, Error, FieldTower, Result};
use serde_json::json;

use crate::context::{Ctx, Evidence, Mode};
use crate::record::{CheckRecord, Status, TowerConstants};
use crate::registry::{find, Scope};

/// Runs one checker against `frame`. Errors only for an unknown id; a
/// checker that hits a library error fails with that error as its witness.
pub fn run_check(theorem_id: &str, frame: &BruckBoseFrame, mode: Mode) -> Result<CheckRecord> {
    let checker = find(theorem_id).ok_or_else(|| Error::UnknownTheorem(theorem_id.to_string()))?;
    let f = frame.tower();
    let q = f.q();
    let (exhaustive, n, seed) = match (mode, checker.scope) {
        (Mode::Exhaustive, Scope::Exhaustive { max_q }) if q > max_q => {
            return Ok(skip_record(theorem_id, f, format!("exhaustive enumeration is limited to q ≤ {max_q}")));
        }
        (Mode::Exhaustive, Scope::Sampled) => {
            return Ok(skip_record(theorem_id, f, "no exhaustive enumeration; use sampled mode".into()));
        }
        (Mode::Exhaustive, _) => (true, 0, 0),
        (Mode::Sampled { n, seed }, _) => (false, n, seed),
        (Mode::Auto { n, seed }, Scope::Exhaustive { max_q }) => (q <= max_q, n, seed),
        (Mode::Auto { n, seed }, _) => (false, n, seed),
    };
    let ctx = Ctx::new(frame, checker.id, exhaustive, n, seed);
    let start = Instant::now();
    let outcome = (checker.run)(&ctx);
    let elapsed_ms = Some(start.elapsed().as_millis() as u64);
    let ev = outcome.unwrap_or_else(|e| {
        let mut ev = Evidence::default();
        ev.require(false, "library error", || json!({ "error": e.to_string() }));
        ev
    });
    let (status, reason, witnesses) = if let Some((what, w)) = ev.failure {
        (Status::Fail, Some(what), vec![w])
    } else if let Some(why) = ev.skip {
        (Status::Skip, Some(why), ev.examples)
    } else {
        (Status::Pass, None, ev.examples)
    };
    Ok(CheckRecord {
        theorem_id: checker.id.to_string(),
        q,
        status,
        reason,
        counts: ev.counts,
        witnesses,
        elapsed_ms,
        tower: TowerConstants::of(f),
    })
}

fn skip_record(id: &str, f: &FieldTower, reason: String) -> CheckRecord {
    CheckRecord {
        theorem_id: id.to_string(),
        q: f.q(),
        status: Status::Skip,
        reason: Some(reason),
        counts: Default::default(),
        witnesses: Vec::new(),
        elapsed_ms: Some(0),
        tower: TowerConstants::of(f),
    }
}

/// A batch of checkers over several fields.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub towers: Vec<FieldTower>,
    pub ids: Vec<String>,
    pub mode: Mode,
    /// Per-checker modes that take precedence over `mode`.
    pub mode_overrides: Vec<(String, Mode)>,
    pub jobs: usize,
    /// Keep wall-clock times in the records; off for reproducible output.
    pub timing: bool,
}

/// Runs every (q, checker) pair on a pool of `jobs` threads. Records come
/// back ordered by the position of `q` in `towers`, then by checker id
/// order in `ids`.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    for id in config.ids.iter().chain(config.mode_overrides.iter().map(|(id, _)| id)) {
        find(id).ok_or_else(|| Error::UnknownTheorem(id.clone()))?;
    }
    let mode_of = |id: &str| config.mode_overrides.iter().rev().find(|(o, _)| o == id).map_or(config.mode, |&(_, m)| m);
    let frames: Vec<BruckBoseFrame> = config.towers.iter().map(|t| BruckBoseFrame::new(t.clone())).collect();
    let tasks: Vec<(usize, &str)> =
        (0..frames.len()).flat_map(|i| config.ids.iter().map(move |id| (i, id.as_str()))).collect();
    let results: Mutex<Vec<Option<CheckRecord>>> = Mutex::new(vec![None; tasks.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..config.jobs.max(1).min(tasks.len().max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, id)) = tasks.get(k) else { break };
                let mut rec = run_check(id, &frames[i], mode_of(id)).expect("ids validated above");
                if !config.timing {
                    rec.elapsed_ms = None;
                }
                results.lock().unwrap()[k] = Some(rec);
            });
        }
    });
    Ok(results.into_inner().unwrap().into_iter().map(|r| r.expect("every task ran")).collect())
}
