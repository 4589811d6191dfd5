//! Configuration-driven study runner: single cases, alpha sweeps and mesh
//! refinement studies, with CSV tables and SVG plots.

pub mod cases;
pub mod config;
pub mod csv;
pub mod runner;
pub mod svg;

pub use cases::{build_case, solve_case, CaseRun, CaseSetup};
pub use config::{
    AlphaSpec, CaseKind, ConditionKind, GridChoice, MethodKind, MethodSpec, StudyConfig, Variant,
};
pub use runner::{check_case, poisson_strong_oracle, run_case, run_convergence, run_sweep};
