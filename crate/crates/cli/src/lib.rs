//! Experiment configuration, parallel execution, the on-disk result store
//! and report emission.

pub mod config;
pub mod experiment;
pub mod report;
pub mod store;

pub use config::{AlgorithmEntry, AlgorithmSpec, ExperimentConfig};
pub use experiment::{run_experiment, RunOptions, RunSummary};
pub use report::delta::emit_delta_report;
pub use report::erd::{emit_erd_report, Grouping};
pub use store::{files_on_disk, Manifest, Store};
