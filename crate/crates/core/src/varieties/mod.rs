//! Varieties of `PG(2,q²)` and their Bruck–Bose images in `PG(4,q)`.

pub mod baer;
pub mod congruence;
pub mod conic;
pub mod curve;
pub mod locus;
pub mod pencil;
pub mod quadric;
pub mod ruled;
pub mod synth;

pub use baer::{standard_conic_image, BaerSubline, BaerSubplane, BaerType, FqConic};
pub use congruence::{congruence_line, special_conic_wrt, CirclePartition};
pub use conic::{ConicPG2, InfinityType};
pub use curve::{specialness, RationalCurve, SpecialClass, Specialness};
pub use locus::{conic_to_pencil, locus_at_infinity, pencil_member_on_g};
pub use pencil::{classify_section, partition_tangent_subplane, sections_about, BaerPencil, CellKind, PartitionCell};
pub use quadric::{QuadricForm, QuadricPencil};
pub use ruled::{Census, RuledCubicSurface, SectionType};
pub use synth::{recover_fq_conic, synthesize, SpecialTarget};
