//! Quality indicators: constraint violation, normalization, distance to the
//! region of interest, hypervolume, and the anytime constrained indicator.

mod hypervolume;
mod state;

pub use hypervolume::hypervolume;
pub use state::{i_cmop, IndicatorState, DEFAULT_TAU_STAR};

use crate::error::{Error, Result};
use crate::pareto::strictly_below_reference;

/// Sum of the positive parts of the constraint values.
pub fn overall_violation(g: &[f64]) -> Result<f64> {
    if g.iter().any(|c| c.is_nan()) {
        return Err(Error::Domain("constraint value is NaN".into()));
    }
    Ok(g.iter().map(|c| c.max(0.0)).sum())
}

/// Maps raw objectives so that the ideal becomes 0 and the nadir 1.
pub fn normalize_objectives(f_raw: &[f64], ideal: &[f64], nadir: &[f64]) -> Result<Vec<f64>> {
    if f_raw.len() != ideal.len() || ideal.len() != nadir.len() {
        return Err(Error::Config(format!(
            "dimension mismatch: {} objectives, ideal of {}, nadir of {}",
            f_raw.len(),
            ideal.len(),
            nadir.len()
        )));
    }
    f_raw
        .iter()
        .zip(ideal.iter().zip(nadir))
        .map(|(f, (lo, hi))| {
            if hi <= lo || hi.is_nan() || lo.is_nan() {
                Err(Error::Config(format!("nadir {hi} is not above ideal {lo}")))
            } else if f.is_nan() {
                Err(Error::Domain("objective value is NaN".into()))
            } else {
                Ok((f - lo) / (hi - lo))
            }
        })
        .collect()
}

/// Euclidean distance from one normalized point to the box `[0, 1]^M`.
pub fn point_distance_to_roi(p: &[f64]) -> f64 {
    p.iter()
        .map(|c| {
            let gap = c - c.clamp(0.0, 1.0);
            gap * gap
        })
        .sum::<f64>()
        .sqrt()
}

/// Smallest distance between the points and the region of interest.
pub fn distance_to_roi(points: &[Vec<f64>]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Precondition("distance of an empty set".into()));
    }
    Ok(points
        .iter()
        .map(|p| point_distance_to_roi(p))
        .fold(f64::INFINITY, f64::min))
}

/// Best-so-far objective value (single objective).
pub fn i_sop(f: &[f64]) -> Result<f64> {
    if f.is_empty() {
        return Err(Error::Precondition("empty sequence".into()));
    }
    Ok(f.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Best-so-far objective plus violation (single objective); takes `(f, v)`.
pub fn i_csop(fv: &[(f64, f64)]) -> Result<f64> {
    if fv.is_empty() {
        return Err(Error::Precondition("empty sequence".into()));
    }
    Ok(fv.iter().map(|(f, v)| f + v).fold(f64::INFINITY, f64::min))
}

/// Negative hypervolume once some point strictly dominates the nadir,
/// distance to the region of interest before that.
pub fn i_mop(points: &[Vec<f64>]) -> Result<f64> {
    let Some(first) = points.first() else {
        return Err(Error::Precondition("empty archive".into()));
    };
    if points.iter().any(|p| strictly_below_reference(p)) {
        Ok(-hypervolume(points, first.len())?)
    } else {
        distance_to_roi(points)
    }
}
