//! Torsion structure of genus-2 Jacobians over small finite fields.

pub mod algebra;
pub mod analysis;
pub mod cli;
pub mod curve;
pub mod oracle;
pub mod pairing;
pub mod weil;

pub use algebra::{FieldContext, FieldElement, IntPoly, UniPoly};
