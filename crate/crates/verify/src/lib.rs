//! Numerical verification of the crgeom constructions over sampled chart points.
//!
//! Each suite builds its construction once, samples points with a fixed seed,
//! evaluates named residuals in parallel and reduces them against pinned tolerances.

pub mod catalog;
pub mod checks;
pub mod config;
pub mod error;
pub mod report;
pub mod run;

pub use checks::{Bound, CheckSpec, Suite, CHECKS};
pub use config::SuiteConfig;
pub use error::VerifyError;
pub use report::{CheckResult, Measurement, Report, ReportSet};
pub use run::{run_many, run_suite};
