//! Three desk-scale bi-objective problems, one per regime of the constrained
//! indicator:
//!
//! * `LIN-TRUNC`: a linear front truncated by a constraint on `x1`; random
//!   initialization is partially feasible.
//! * `DELAYED-FEAS`: the feasible region is a thin shell near the corners of
//!   the box; random initialization is infeasible with overwhelming
//!   probability for `D >= 10`.
//! * `HOLE`: a circular infeasible hole cuts a gap out of the linear front.
//!
//! All three share `f1 = x1` and `f2 = 1 - x1 + sum_{i>=2} x_i^2`, so the
//! Pareto set is `x_i = 0` for `i >= 2`.

use std::f64::consts::SQRT_2;

use super::ProblemDefinition;
use crate::error::{Error, Result};
use crate::types::{BoxBounds, Evaluation, ProblemMeta};

pub const LIN_TRUNC: &str = "LIN-TRUNC";
pub const DELAYED_FEAS: &str = "DELAYED-FEAS";
pub const HOLE: &str = "HOLE";

pub const BUILTIN_NAMES: [&str; 3] = [LIN_TRUNC, DELAYED_FEAS, HOLE];

/// Minimal mean squared deviation from 0.5 for `DELAYED-FEAS` feasibility.
const SHELL: f64 = 0.22;
/// Squared radius of the `HOLE` infeasible disc centered at (0.5, 0.5).
const HOLE_RADIUS_SQ: f64 = 0.04;

fn shared_objectives(x: &[f64]) -> (f64, f64) {
    let tail: f64 = x[1..].iter().map(|v| v * v).sum();
    (x[0], 1.0 - x[0] + tail)
}

/// `n` evenly spaced points of `f2 = 1 - f1` over the given `f1` intervals,
/// allotted in proportion to interval length.
fn linear_front(segments: &[(f64, f64)], n: usize) -> Vec<Vec<f64>> {
    let total: f64 = segments.iter().map(|(a, b)| b - a).sum();
    let mut points = Vec::with_capacity(n);
    let mut remaining = n;
    for (k, (a, b)) in segments.iter().enumerate() {
        let share = if k + 1 == segments.len() {
            remaining
        } else {
            ((n as f64) * (b - a) / total).round() as usize
        };
        remaining -= share.min(remaining);
        for i in 0..share {
            let t = if share == 1 { 0.0 } else { i as f64 / (share - 1) as f64 };
            let f1 = a + (b - a) * t;
            points.push(vec![f1, 1.0 - f1]);
        }
    }
    points
}

/// Builds a built-in problem in dimension `dim` (at least 2).
pub fn builtin(name: &str, dim: usize) -> Result<ProblemDefinition> {
    if !BUILTIN_NAMES.contains(&name) {
        return Err(Error::UnknownProblem(name.to_string()));
    }
    if dim < 2 {
        return Err(Error::Config(format!("{name} needs at least 2 variables, got {dim}")));
    }
    let unit = BoxBounds::uniform(dim, 0.0, 1.0)?;
    match name {
        LIN_TRUNC => {
            let mut lower = vec![-1.0; dim];
            lower[0] = 0.0;
            let meta = ProblemMeta {
                name: LIN_TRUNC.into(),
                dim,
                n_obj: 2,
                n_con: 1,
                bounds: BoxBounds::new(lower, vec![1.0; dim])?,
                ideal: vec![0.5, 0.0],
                nadir: vec![1.0, 0.5],
                hv_ref: Some(0.5),
            };
            Ok(ProblemDefinition::new(meta, |x| {
                let (f1, f2) = shared_objectives(x);
                (vec![f1, f2], vec![0.5 - x[0]])
            })?
            .with_front(|n| linear_front(&[(0.0, 1.0)], n)))
        }
        DELAYED_FEAS => {
            let meta = ProblemMeta {
                name: DELAYED_FEAS.into(),
                dim,
                n_obj: 2,
                n_con: 1,
                bounds: unit,
                ideal: vec![0.0, 0.0],
                nadir: vec![1.0, 1.0],
                hv_ref: Some(0.5),
            };
            Ok(ProblemDefinition::new(meta, |x| {
                let (f1, f2) = shared_objectives(x);
                let spread = x[1..].iter().map(|v| (v - 0.5) * (v - 0.5)).sum::<f64>() / (x.len() - 1) as f64;
                (vec![f1, f2], vec![SHELL - spread])
            })?
            .with_front(|n| linear_front(&[(0.0, 1.0)], n)))
        }
        _ => {
            let meta = ProblemMeta {
                name: HOLE.into(),
                dim,
                n_obj: 2,
                n_con: 1,
                bounds: unit,
                ideal: vec![0.0, 0.0],
                nadir: vec![1.0, 1.0],
                hv_ref: Some(0.46),
            };
            let gap = HOLE_RADIUS_SQ.sqrt() / SQRT_2;
            Ok(ProblemDefinition::new(meta, |x| {
                let (f1, f2) = shared_objectives(x);
                let g = HOLE_RADIUS_SQ - (f1 - 0.5).powi(2) - (f2 - 0.5).powi(2);
                (vec![f1, f2], vec![g])
            })?
            .with_front(move |n| linear_front(&[(0.0, 0.5 - gap), (0.5 + gap, 1.0)], n)))
        }
    }
}

/// Evaluates a built-in problem at `x`; the dimension is taken from `x` and
/// the result carries evaluation index 1.
pub fn evaluate_builtin(name: &str, x: &[f64]) -> Result<Evaluation> {
    builtin(name, x.len())?.evaluate(x, 1)
}
