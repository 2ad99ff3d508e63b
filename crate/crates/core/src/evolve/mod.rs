//! Variation operators, constraint-handling comparators, and three
//! reference engines. Engines stream every evaluation to an
//! [`IndicatorSink`] in order and never read indicator values back.

mod cdp_ea;
pub mod compare;
mod config;
mod moead;
pub mod operators;
pub mod sorting;
mod two_archive;

use std::io::Write;

pub use cdp_ea::run_cdp_ea;
pub use compare::{cdp_compare, eps_compare, tchebycheff, EpsilonSchedule, ScheduleParams, Verdict};
pub use config::{AlgorithmConfig, AlgorithmKind, MoeadParams};
pub use moead::run_moead_ieps;
pub use operators::{de_crossover, poly_mutation, sbx, DeParams, MutationParams, SbxParams};
pub use sorting::{crowding_distance, nondominated_sort, simplex_weights};
pub use two_archive::run_two_archive;

use crate::error::{Error, Result};
use crate::indicators::IndicatorState;
use crate::problems::ProblemDefinition;
use crate::rng::RngStream;
use crate::runtimes::StepRecorder;
use crate::trace::TraceWriter;
use crate::types::{Evaluation, RunTrace};

/// Receives each evaluation as soon as it is produced.
pub trait IndicatorSink {
    fn push(&mut self, e: &Evaluation) -> Result<()>;
}

impl<T: IndicatorSink + ?Sized> IndicatorSink for &mut T {
    fn push(&mut self, e: &Evaluation) -> Result<()> {
        (**self).push(e)
    }
}

impl IndicatorSink for Vec<Evaluation> {
    fn push(&mut self, e: &Evaluation) -> Result<()> {
        Vec::push(self, e.clone());
        Ok(())
    }
}

impl IndicatorSink for IndicatorState {
    fn push(&mut self, e: &Evaluation) -> Result<()> {
        self.ingest(e).map(|_| ())
    }
}

impl IndicatorSink for StepRecorder {
    fn push(&mut self, e: &Evaluation) -> Result<()> {
        StepRecorder::push(self, e)
    }
}

impl<W: Write> IndicatorSink for TraceWriter<W> {
    fn push(&mut self, e: &Evaluation) -> Result<()> {
        TraceWriter::push(self, e)
    }
}

impl<A: IndicatorSink, B: IndicatorSink> IndicatorSink for (A, B) {
    fn push(&mut self, e: &Evaluation) -> Result<()> {
        self.0.push(e)?;
        self.1.push(e)
    }
}

/// Discards everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NullSink;

impl IndicatorSink for NullSink {
    fn push(&mut self, _: &Evaluation) -> Result<()> {
        Ok(())
    }
}

/// Engine-internal observations of one run.
#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    pub evaluations: u64,
    pub initial_feasible: usize,
    /// Comparison level per generation, starting with the initial one.
    pub epsilon: Vec<f64>,
    /// Largest number of solutions one offspring replaced.
    pub max_replacements: usize,
    /// Final population, or convergence archive for the two-archive engine.
    pub population: Vec<Evaluation>,
    pub diversity_archive: Vec<Evaluation>,
}

/// Evaluates search vectors in order, counting and forwarding them.
pub(crate) struct Evaluator<'a> {
    problem: &'a ProblemDefinition,
    sink: &'a mut dyn IndicatorSink,
    count: u64,
    budget: u64,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(problem: &'a ProblemDefinition, sink: &'a mut dyn IndicatorSink, budget: u64) -> Self {
        Self {
            problem,
            sink,
            count: 0,
            budget,
        }
    }

    pub(crate) fn eval(&mut self, x: Vec<f64>) -> Result<Evaluation> {
        if self.count >= self.budget {
            return Err(Error::Precondition(format!(
                "evaluation budget of {} exhausted",
                self.budget
            )));
        }
        self.count += 1;
        let e = self.problem.evaluate(&x, self.count)?;
        self.sink.push(&e)?;
        Ok(e)
    }

    pub(crate) fn count(&self) -> u64 {
        self.count
    }
}

/// Binary tournament under constrained domination; ties are broken at
/// random.
pub(crate) fn cdp_tournament(pop: &[Evaluation], rng: &mut RngStream) -> usize {
    let a = rng.index(pop.len());
    let b = rng.index(pop.len());
    match cdp_compare(&pop[a], &pop[b]) {
        Verdict::ABetter => a,
        Verdict::BBetter => b,
        Verdict::Tie => {
            if rng.chance(0.5) {
                a
            } else {
                b
            }
        }
    }
}

pub(crate) fn component_min(pop: &[Evaluation], n_obj: usize) -> Vec<f64> {
    let mut z = vec![f64::INFINITY; n_obj];
    for e in pop {
        for (zm, fm) in z.iter_mut().zip(&e.f) {
            *zm = zm.min(*fm);
        }
    }
    z
}

/// Runs the configured engine with the given seed.
pub fn run_algorithm(
    problem: &ProblemDefinition,
    config: &AlgorithmConfig,
    seed: u64,
    sink: &mut dyn IndicatorSink,
) -> Result<Diagnostics> {
    config.validate(problem.meta())?;
    match config.kind {
        AlgorithmKind::CdpEa => run_cdp_ea(problem, config, seed, sink),
        AlgorithmKind::MoeadIeps => run_moead_ieps(problem, config, seed, sink),
        AlgorithmKind::TwoArchive => run_two_archive(problem, config, seed, sink),
    }
}

/// Runs an engine and keeps every evaluation.
pub fn run_to_trace(
    problem: &ProblemDefinition,
    config: &AlgorithmConfig,
    algorithm: &str,
    run_index: u32,
    seed: u64,
) -> Result<(RunTrace, Diagnostics)> {
    let mut evaluations = Vec::new();
    let diagnostics = run_algorithm(problem, config, seed, &mut evaluations)?;
    let trace = RunTrace {
        problem: problem.meta().clone(),
        algorithm: algorithm.to_string(),
        run_index,
        seed,
        budget: config.budget_for(problem.meta()),
        evaluations,
    };
    trace.check()?;
    Ok((trace, diagnostics))
}
