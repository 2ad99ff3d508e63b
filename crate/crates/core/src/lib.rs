//! Anytime performance assessment for constrained multiobjective
//! optimization: a scalar quality indicator over evaluation traces, target
//! sets and runtime distributions, a pairwise distance between runtime
//! profiles, and three reference optimizers.

pub mod delta;
pub mod error;
pub mod evolve;
pub mod indicators;
pub mod oracle;
pub mod pareto;
pub mod problems;
pub mod rng;
pub mod runtimes;
pub mod targets;
pub mod trace;
pub mod types;

pub use delta::{delta_pair, DeltaResult};
pub use error::{Error, Result};
pub use evolve::{run_algorithm, AlgorithmConfig, AlgorithmKind, Diagnostics, IndicatorSink};
pub use indicators::{i_cmop, IndicatorState};
pub use problems::{ProblemDefinition, Registry};
pub use rng::{derive_seed, RngStream};
pub use runtimes::{RunId, RuntimeRecord, StepPoint};
pub use targets::{make_targets, ScaleFactors, TargetClass, TargetSet};
pub use types::{BoxBounds, Evaluation, ProblemMeta, RunTrace};
