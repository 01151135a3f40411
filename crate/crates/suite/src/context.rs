use std::collections::BTreeMap;

use bbgeom::linalg::Matrix;
use bbgeom::{BruckBoseFrame, FElem, FieldTower, Point, Subspace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

/// How a checker chooses its instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    /// Enumerate every object of the relevant kind.
    Exhaustive,
    /// Draw `n` pseudo-random instances from `seed`.
    Sampled { n: usize, seed: u64 },
    /// Exhaustive where the checker supports it at this `q`, sampled
    /// otherwise.
    Auto { n: usize, seed: u64 },
}

impl Default for Mode {
    fn default() -> Mode {
        Mode::Auto { n: 200, seed: 0 }
    }
}

pub(crate) struct Ctx<'a> {
    pub frame: &'a BruckBoseFrame,
    pub exhaustive: bool,
    pub n: usize,
    seed: u64,
    id: &'static str,
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

impl<'a> Ctx<'a> {
    pub fn new(frame: &'a BruckBoseFrame, id: &'static str, exhaustive: bool, n: usize, seed: u64) -> Ctx<'a> {
        Ctx { frame, exhaustive, n, seed, id }
    }

    pub fn f(&self) -> &'a FieldTower {
        self.frame.tower()
    }

    pub fn q(&self) -> u32 {
        self.frame.q()
    }

    /// A generator on its own stream per (checker, `q`).
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(fnv1a(self.id) ^ ((self.q() as u64) << 48));
        rng
    }
}

/// Counts, illustrative witnesses and the first violation of a checker run.
#[derive(Default)]
pub(crate) struct Evidence {
    pub counts: BTreeMap<String, u64>,
    pub examples: Vec<Value>,
    pub failure: Option<(String, Value)>,
    pub skip: Option<String>,
}

const MAX_EXAMPLES: usize = 2;

impl Evidence {
    pub fn skipped(reason: impl Into<String>) -> Evidence {
        Evidence { skip: Some(reason.into()), ..Evidence::default() }
    }

    pub fn bump(&mut self, key: &str) {
        self.add(key, 1);
    }

    pub fn add(&mut self, key: &str, n: u64) {
        *self.counts.entry(key.to_string()).or_default() += n;
    }

    pub fn set(&mut self, key: &str, n: u64) {
        self.counts.insert(key.to_string(), n);
    }

    /// Records the first violation; returns `ok`.
    pub fn require(&mut self, ok: bool, what: &str, witness: impl FnOnce() -> Value) -> bool {
        if !ok && self.failure.is_none() {
            self.failure = Some((what.to_string(), witness()));
        }
        ok
    }

    pub fn example(&mut self, w: impl FnOnce() -> Value) {
        if self.examples.len() < MAX_EXAMPLES {
            self.examples.push(w());
        }
    }
}

pub(crate) fn el(x: FElem) -> Value {
    json!(x.0)
}

pub(crate) fn param(x: Option<FElem>) -> Value {
    x.map_or(json!("inf"), el)
}

pub(crate) fn pt(p: &Point) -> Value {
    Value::Array(p.coords().iter().map(|&x| el(x)).collect())
}

pub(crate) fn pts<'p>(ps: impl IntoIterator<Item = &'p Point>) -> Value {
    Value::Array(ps.into_iter().map(pt).collect())
}

pub(crate) fn mat(m: &Matrix) -> Value {
    Value::Array(m.iter().map(|row| Value::Array(row.iter().map(|&x| el(x)).collect())).collect())
}

pub(crate) fn sub(s: &Subspace) -> Value {
    mat(s.basis())
}
