//! Real-coded variation operators. Every child is clamped to the box.

use serde::{Deserialize, Serialize};

use crate::rng::RngStream;
use crate::types::BoxBounds;

/// Simulated binary crossover.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SbxParams {
    pub probability: f64,
    pub eta: f64,
}

impl Default for SbxParams {
    fn default() -> Self {
        Self {
            probability: 1.0,
            eta: 30.0,
        }
    }
}

/// Polynomial mutation; a missing probability means `1 / D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct MutationParams {
    pub probability: Option<f64>,
    pub eta: Option<f64>,
}

impl MutationParams {
    pub fn probability_for(&self, dim: usize) -> f64 {
        self.probability.unwrap_or(1.0 / dim as f64)
    }

    pub fn eta(&self) -> f64 {
        self.eta.unwrap_or(20.0)
    }
}

/// Differential-evolution crossover.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeParams {
    pub cr: f64,
    pub f: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self { cr: 1.0, f: 0.5 }
    }
}

const MIN_SPREAD: f64 = 1e-14;

fn spread_factor(u: f64, beta: f64, eta: f64) -> f64 {
    let alpha = 2.0 - beta.powf(-(eta + 1.0));
    if u <= 1.0 / alpha {
        (u * alpha).powf(1.0 / (eta + 1.0))
    } else {
        (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
    }
}

/// Bounded SBX; each variable is recombined with probability 1/2.
pub fn sbx(
    p1: &[f64],
    p2: &[f64],
    bounds: &BoxBounds,
    params: &SbxParams,
    rng: &mut RngStream,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if !rng.chance(params.probability) {
        return (c1, c2);
    }
    let eta = params.eta;
    for i in 0..p1.len() {
        if !rng.chance(0.5) || (p1[i] - p2[i]).abs() <= MIN_SPREAD {
            continue;
        }
        let (y1, y2) = if p1[i] < p2[i] { (p1[i], p2[i]) } else { (p2[i], p1[i]) };
        let (lo, hi) = (bounds.lower()[i], bounds.upper()[i]);
        let u = rng.uniform();
        let bq1 = spread_factor(u, 1.0 + 2.0 * (y1 - lo) / (y2 - y1), eta);
        let bq2 = spread_factor(u, 1.0 + 2.0 * (hi - y2) / (y2 - y1), eta);
        let a = (0.5 * ((y1 + y2) - bq1 * (y2 - y1))).clamp(lo, hi);
        let b = (0.5 * ((y1 + y2) + bq2 * (y2 - y1))).clamp(lo, hi);
        if rng.chance(0.5) {
            (c1[i], c2[i]) = (b, a);
        } else {
            (c1[i], c2[i]) = (a, b);
        }
    }
    (c1, c2)
}

/// Bounded polynomial mutation, in place.
pub fn poly_mutation(x: &mut [f64], bounds: &BoxBounds, params: &MutationParams, rng: &mut RngStream) {
    let pm = params.probability_for(x.len());
    let eta = params.eta();
    let pow = 1.0 / (eta + 1.0);
    for (i, y) in x.iter_mut().enumerate() {
        if !rng.chance(pm) {
            continue;
        }
        let (lo, hi) = (bounds.lower()[i], bounds.upper()[i]);
        let width = hi - lo;
        let d1 = (*y - lo) / width;
        let d2 = (hi - *y) / width;
        let u = rng.uniform();
        let dq = if u < 0.5 {
            let val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0);
            val.powf(pow) - 1.0
        } else {
            let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - val.powf(pow)
        };
        *y = (*y + dq * width).clamp(lo, hi);
    }
}

/// `x1 + F (x2 - x3)` on the crossed-over coordinates, `x1` elsewhere.
pub fn de_crossover(
    x1: &[f64],
    x2: &[f64],
    x3: &[f64],
    bounds: &BoxBounds,
    params: &DeParams,
    rng: &mut RngStream,
) -> Vec<f64> {
    let forced = rng.index(x1.len());
    (0..x1.len())
        .map(|i| {
            if i == forced || rng.chance(params.cr) {
                (x1[i] + params.f * (x2[i] - x3[i])).clamp(bounds.lower()[i], bounds.upper()[i])
            } else {
                x1[i]
            }
        })
        .collect()
}
