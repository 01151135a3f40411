pub(crate) mod adult;
pub(crate) mod baer;
pub(crate) mod baby;
pub(crate) mod frame;
pub(crate) mod partition;
pub(crate) mod ruled;
pub(crate) mod spread;

use bbgeom::Result;
use serde_json::json;

use crate::context::{Ctx, Evidence};

/// Runs `check` and, when `q ≤ bound`, reports the outcome as an
/// observation under a skip: the result only claims `q > bound`.
pub(crate) fn gated(ctx: &Ctx, bound: u32, check: fn(&Ctx) -> Result<Evidence>) -> Result<Evidence> {
    if ctx.q() > bound {
        return check(ctx);
    }
    let mut ev = match check(ctx) {
        Ok(ev) => ev,
        Err(e) => {
            let mut ev = Evidence::default();
            ev.set("observed_errors", 1);
            ev.example(|| json!({ "error": e.to_string() }));
            ev
        }
    };
    let violation = ev.failure.take();
    ev.set("observed_violations", violation.is_some() as u64);
    if let Some((what, w)) = violation {
        ev.examples.insert(0, json!({ "observed": what, "witness": w }));
        ev.examples.truncate(2);
    }
    ev.skip = Some(format!("requires q>{bound}"));
    Ok(ev)
}
