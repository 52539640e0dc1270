//! Constructions of multicolor Ramsey lower-bound colorings from
//! self-orthogonal vectors over prime fields, exact verification of small
//! instances, and exact evaluation of the resulting bound formulas.

pub mod bounds;
pub mod cli;
pub mod clique;
pub mod coloring;
pub mod composition;
pub mod error;
pub mod field;
pub mod isotropic;
pub mod moment;
pub mod rng;
pub mod witness;

pub use error::{Error, Result};
