//! Domain types shared across the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indicators::{normalize_objectives, overall_violation};

/// Axis-aligned search box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Config(format!(
                "bounds length mismatch: {} lower vs {} upper",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(Error::Config("bounds must have at least one dimension".into()));
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if lo >= hi || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::Config(format!(
                    "bounds for coordinate {i} are not an interval: [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval repeated `dim` times.
    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

/// Static description of a problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemMeta {
    pub name: String,
    pub dim: usize,
    pub n_obj: usize,
    pub n_con: usize,
    pub bounds: BoxBounds,
    pub ideal: Vec<f64>,
    pub nadir: Vec<f64>,
    /// Hypervolume of the normalized Pareto front w.r.t. (1, ..., 1).
    pub hv_ref: Option<f64>,
}

impl ProblemMeta {
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::Config("problem name is empty".into()));
        }
        if self.dim == 0 || self.bounds.dim() != self.dim {
            return Err(Error::Config(format!(
                "{}: dimension {} does not match bounds of dimension {}",
                self.name,
                self.dim,
                self.bounds.dim()
            )));
        }
        if !(2..=3).contains(&self.n_obj) {
            return Err(Error::Config(format!(
                "{}: number of objectives must be 2 or 3, got {}",
                self.name, self.n_obj
            )));
        }
        if self.n_con == 0 {
            return Err(Error::Config(format!("{}: no constraints declared", self.name)));
        }
        if self.ideal.len() != self.n_obj || self.nadir.len() != self.n_obj {
            return Err(Error::Config(format!(
                "{}: ideal/nadir must have {} components",
                self.name, self.n_obj
            )));
        }
        if self
            .ideal
            .iter()
            .zip(&self.nadir)
            .any(|(i, n)| i >= n || i.is_nan() || n.is_nan())
        {
            return Err(Error::Config(format!(
                "{}: ideal must be strictly below nadir in every objective",
                self.name
            )));
        }
        if let Some(hv) = self.hv_ref {
            if !(hv > 0.0 && hv <= 1.0) {
                return Err(Error::Config(format!(
                    "{}: reference hypervolume {hv} outside (0, 1]",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

/// One joint evaluation of all objectives and constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub x: Vec<f64>,
    pub f_raw: Vec<f64>,
    /// Objectives normalized with the problem's ideal and nadir vectors.
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    /// Overall constraint violation, zero iff feasible.
    pub v: f64,
    /// 1-based function evaluation counter.
    pub eval_index: u64,
}

impl Evaluation {
    /// Assembles an evaluation, deriving the normalized objectives and the
    /// overall violation.
    pub fn from_parts(meta: &ProblemMeta, x: Vec<f64>, f_raw: Vec<f64>, g: Vec<f64>, eval_index: u64) -> Result<Self> {
        if f_raw.len() != meta.n_obj || g.len() != meta.n_con {
            return Err(Error::Domain(format!(
                "{}: expected {} objectives and {} constraints, got {} and {}",
                meta.name,
                meta.n_obj,
                meta.n_con,
                f_raw.len(),
                g.len()
            )));
        }
        let f = normalize_objectives(&f_raw, &meta.ideal, &meta.nadir)?;
        let v = overall_violation(&g)?;
        Ok(Self {
            x,
            f_raw,
            f,
            g,
            v,
            eval_index,
        })
    }

    pub fn is_feasible(&self) -> bool {
        self.v == 0.0
    }
}

/// The ordered sequence of evaluations produced by one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub problem: ProblemMeta,
    pub algorithm: String,
    pub run_index: u32,
    pub seed: u64,
    pub budget: u64,
    pub evaluations: Vec<Evaluation>,
}

impl RunTrace {
    /// Checks the sequencing invariants: indices 1..=len, within budget.
    pub fn check(&self) -> Result<()> {
        if self.evaluations.len() as u64 > self.budget {
            return Err(Error::Sequencing(format!(
                "{} evaluations exceed the budget of {}",
                self.evaluations.len(),
                self.budget
            )));
        }
        for (i, e) in self.evaluations.iter().enumerate() {
            if e.eval_index != i as u64 + 1 {
                return Err(Error::Sequencing(format!(
                    "evaluation at position {i} has index {}",
                    e.eval_index
                )));
            }
        }
        Ok(())
    }

    /// File name used when persisting this trace.
    pub fn file_name(&self) -> String {
        trace_file_name(&self.problem.name, &self.algorithm, self.run_index)
    }
}

pub fn trace_file_name(problem: &str, algorithm: &str, run_index: u32) -> String {
    format!("{problem}__{algorithm}__run{run_index}.csv")
}
