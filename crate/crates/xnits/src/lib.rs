//! Embedded-interface finite elements in 1D and 2D linear elastostatics.
//!
//! The mesh never conforms to the interface: a level set describes it, cut
//! elements are sub-triangulated for integration, and the displacement space
//! is enriched with shifted-Heaviside functions. Interface conditions (a
//! prescribed displacement/traction jump, or independent Dirichlet data on
//! each side) are enforced weakly by Nitsche's method with derived
//! element-local stabilization, or by the penalty and Lagrange-multiplier
//! baselines for comparison.

pub mod assembly;
pub mod cli;
pub mod enrichment;
pub mod error;
pub mod geometry;
pub mod physics;
pub mod solve;
pub mod verify;

pub use error::{Error, Result};
