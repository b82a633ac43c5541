//! Experiment harness around the `noflow` solver: named model setups,
//! single runs with snapshots and monitors, refinement sweeps with rate
//! fits, the structural-property monitor suite, and deterministic CSV
//! output.

pub mod config;
pub mod csvio;
pub mod presets;
pub mod runner;

pub use config::{ExperimentSpec, ModelKind, SchemeKind};
pub use runner::{monitor_suite, run, sweep, MonitorSuiteReport, RunArtifacts, RunError};
