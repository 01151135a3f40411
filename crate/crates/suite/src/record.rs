use std::collections::BTreeMap;

use bbgeom::FieldTower;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// The tower constants as element codes: `τ² = t1·τ + t0` and
/// `σ² = s1·σ + s0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TowerConstants {
    pub t1: u16,
    pub t0: u16,
    pub s1: u16,
    pub s0: u16,
}

impl TowerConstants {
    pub fn of(f: &FieldTower) -> TowerConstants {
        TowerConstants { t1: f.t1().0, t0: f.t0().0, s1: f.s1().0, s0: f.s0().0 }
    }
}

/// The outcome of one checker at one `q`. A failing record carries the
/// first counterexample found as its only witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub theorem_id: String,
    pub q: u32,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub counts: BTreeMap<String, u64>,
    pub witnesses: Vec<Value>,
    pub elapsed_ms: Option<u64>,
    pub tower: TowerConstants,
}
