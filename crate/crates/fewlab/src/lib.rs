//! Experiment harness for random fewnomial systems: configuration, seeded
//! parallel Monte Carlo runs, cross-checks against density integrals and
//! closed-form bounds, and result files.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{ConfigError, ExperimentConfig, ExperimentKind, SigmaSpec, SupportSpec};
pub use experiments::{estimate_expected_zeros, regression_supports, run, RunError};
pub use report::{ExperimentReport, ReportBody, Row, Verdict};
