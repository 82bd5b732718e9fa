//! Causal validation: conditional-independence tests for DAG-implied
//! constraints, and intervention-based invariance checks of fitted predictors.

mod ci;
mod invariance;

pub use ci::{fisher_z_test, CiTestResult};
pub use invariance::{invariance_test, InvarianceReport, Verdict, DEFAULT_INVARIANCE_THRESHOLD};
