pub mod bruckbose;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod projective;
pub mod regulus;
pub mod varieties;

pub use bruckbose::BruckBoseFrame;
pub use error::{Error, Result};
pub use gf::{FElem, FieldTower, Level};
pub use projective::{Point, Subspace};
