//! Partial traces, partial transpose and determinantal inequalities for
//! complex block matrices, with a seeded verification harness.

pub mod error;
pub mod matkernel;
pub mod blockops;
pub mod cones;
pub mod generators;
pub mod inequalities;
pub mod harness;
mod serde_real;
