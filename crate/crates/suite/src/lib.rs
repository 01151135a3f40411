//! Named checkers, one per result of the Bruck–Bose theory, each producing
//! a structured [`CheckRecord`].
//!
//! ```
//! use bbgeom::{BruckBoseFrame, FieldTower};
//! use bbgeom_suite::{run_check, Mode, Status};
//!
//! let frame = BruckBoseFrame::new(FieldTower::new(3).unwrap());
//! let rec = run_check("3-space-meets-ruled", &frame, Mode::Exhaustive).unwrap();
//! assert_eq!(rec.status, Status::Pass);
//! ```

mod checks;
mod context;
mod gen;
mod record;
mod registry;
mod runner;

pub use context::Mode;
pub use record::{CheckRecord, Status, TowerConstants};
pub use registry::{checker_ids, Scope};
pub use runner::{run_check, run_suite, SuiteConfig};
