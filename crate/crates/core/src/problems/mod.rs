//! Problem contract, built-in desk problems, and the name registry.

mod builtin;
mod registry;

use std::fmt;
use std::sync::Arc;

pub use builtin::{builtin, evaluate_builtin, BUILTIN_NAMES, DELAYED_FEAS, HOLE, LIN_TRUNC};
pub use registry::Registry;

use crate::error::{Error, Result};
use crate::types::{Evaluation, ProblemMeta};

/// Maps a search vector to `(raw objectives, constraint values)`.
pub type EvaluateFn = dyn Fn(&[f64]) -> (Vec<f64>, Vec<f64>) + Send + Sync;

/// Produces `n` points spread over the normalized Pareto front.
pub type FrontSampleFn = dyn Fn(usize) -> Vec<Vec<f64>> + Send + Sync;

/// A problem instance: metadata plus a pure evaluation function.
#[derive(Clone)]
pub struct ProblemDefinition {
    meta: ProblemMeta,
    evaluate: Arc<EvaluateFn>,
    front: Option<Arc<FrontSampleFn>>,
}

impl fmt::Debug for ProblemDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemDefinition")
            .field("meta", &self.meta)
            .field("front", &self.front.is_some())
            .finish()
    }
}

impl ProblemDefinition {
    pub fn new(
        meta: ProblemMeta,
        evaluate: impl Fn(&[f64]) -> (Vec<f64>, Vec<f64>) + Send + Sync + 'static,
    ) -> Result<Self> {
        meta.validate()?;
        Ok(Self {
            meta,
            evaluate: Arc::new(evaluate),
            front: None,
        })
    }

    /// Attaches a sampler of the normalized Pareto front, used by the
    /// Monte-Carlo audit.
    pub fn with_front(mut self, front: impl Fn(usize) -> Vec<Vec<f64>> + Send + Sync + 'static) -> Self {
        self.front = Some(Arc::new(front));
        self
    }

    pub fn meta(&self) -> &ProblemMeta {
        &self.meta
    }

    pub fn name(&self) -> &str {
        &self.meta.name
    }

    pub fn front_sample(&self, n: usize) -> Option<Vec<Vec<f64>>> {
        self.front.as_ref().map(|f| f(n))
    }

    /// Evaluates `x`, which must lie in the box, as evaluation number
    /// `eval_index`.
    pub fn evaluate(&self, x: &[f64], eval_index: u64) -> Result<Evaluation> {
        if x.len() != self.meta.dim {
            return Err(Error::Domain(format!(
                "{}: expected a {}-dimensional vector, got {}",
                self.meta.name,
                self.meta.dim,
                x.len()
            )));
        }
        if !self.meta.bounds.contains(x) {
            return Err(Error::Domain(format!(
                "{}: search vector outside the box",
                self.meta.name
            )));
        }
        let (f_raw, g) = (self.evaluate)(x);
        Evaluation::from_parts(&self.meta, x.to_vec(), f_raw, g, eval_index)
    }
}
