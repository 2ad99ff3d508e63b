//! Target precision values and the sampling-based scaling of the distance
//! and violation branches of the constrained indicator.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indicators::{point_distance_to_roi, IndicatorState, DEFAULT_TAU_STAR};
use crate::problems::ProblemDefinition;
use crate::rng::{uniform_init, RngStream};
use crate::types::ProblemMeta;

/// Number of uniform samples used to estimate the scale factors.
pub const SCALE_SAMPLE_SIZE: usize = 100;

/// Exponents `k = -5.0, -4.9, ..., 0.0` stored as tenths.
const EXPONENT_TENTHS: std::ops::RangeInclusive<i32> = -50..=0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleFactors {
    pub d_scale: f64,
    pub v_scale: f64,
    pub sample_size: usize,
    pub sample_seed: u64,
}

impl ScaleFactors {
    pub fn identity() -> Self {
        Self {
            d_scale: 1.0,
            v_scale: 1.0,
            sample_size: 0,
            sample_seed: 0,
        }
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// `10^ceil(log10(median))`, or 1 when the median is zero or not finite.
pub fn power_of_ten_scale(median: f64) -> f64 {
    if median <= 0.0 || !median.is_finite() {
        return 1.0;
    }
    let mut k = median.log10().ceil() as i32;
    // log10 can be off by an ulp right at powers of ten
    while 10f64.powi(k - 1) >= median {
        k -= 1;
    }
    while 10f64.powi(k) < median {
        k += 1;
    }
    10f64.powi(k)
}

/// Samples uniform solutions and derives the distance and violation scales
/// from their medians.
pub fn compute_scales(problem: &ProblemDefinition, rng: &mut RngStream) -> Result<ScaleFactors> {
    let samples = uniform_init(&problem.meta().bounds, SCALE_SAMPLE_SIZE, rng);
    let mut d = Vec::with_capacity(samples.len());
    let mut v = Vec::with_capacity(samples.len());
    for (i, x) in samples.iter().enumerate() {
        let e = problem.evaluate(x, i as u64 + 1)?;
        d.push(point_distance_to_roi(&e.f));
        v.push(e.v);
    }
    Ok(ScaleFactors {
        d_scale: power_of_ten_scale(median(&mut d)),
        v_scale: power_of_ten_scale(median(&mut v)),
        sample_size: SCALE_SAMPLE_SIZE,
        sample_seed: rng.seed(),
    })
}

/// The indicator with scaled distance and violation branches.
pub fn scaled_indicator(state: &IndicatorState, scales: &ScaleFactors) -> f64 {
    state.scaled_value(scales.d_scale, scales.v_scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TargetClass {
    /// Front approximation.
    Plus,
    /// Constraint satisfaction.
    Minus,
}

impl fmt::Display for TargetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetClass::Plus => "tau_plus",
            TargetClass::Minus => "tau_minus",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub epsilon: f64,
    pub value: f64,
    pub class: TargetClass,
}

/// 102 targets `tau_ref + epsilon`, in increasing order of value (from the
/// hardest front-approximation target to the easiest constraint target).
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSet {
    pub tau_ref: f64,
    pub tau_star: f64,
    pub(crate) targets: Vec<Target>,
}

fn power_of_ten_tenths(tenths: i32) -> f64 {
    if tenths % 10 == 0 {
        10f64.powi(tenths / 10)
    } else {
        10f64.powf(f64::from(tenths) / 10.0)
    }
}

/// Builds the target set of a problem from its reference hypervolume.
pub fn make_targets(meta: &ProblemMeta) -> Result<TargetSet> {
    let hv = meta
        .hv_ref
        .ok_or_else(|| Error::Config(format!("{} declares no reference hypervolume", meta.name)))?;
    Ok(targets_from_reference(hv))
}

/// Target set for reference hypervolume `hv_ref`.
pub fn targets_from_reference(hv_ref: f64) -> TargetSet {
    let tau_ref = -hv_ref;
    let mut targets = Vec::with_capacity(102);
    for (class, offset) in [(TargetClass::Plus, 0.0), (TargetClass::Minus, 1.0)] {
        for tenths in EXPONENT_TENTHS {
            let epsilon = offset + power_of_ten_tenths(tenths);
            targets.push(Target {
                epsilon,
                value: tau_ref + epsilon,
                class,
            });
        }
    }
    TargetSet {
        tau_ref,
        tau_star: DEFAULT_TAU_STAR,
        targets,
    }
}

impl TargetSet {
    pub fn targets(&self) -> &[Target] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.targets.iter().map(|t| t.value).collect()
    }

    pub fn classes(&self) -> Vec<TargetClass> {
        self.targets.iter().map(|t| t.class).collect()
    }

    pub fn count(&self, class: TargetClass) -> usize {
        self.targets.iter().filter(|t| t.class == class).count()
    }

    /// Writes `index,epsilon,value,class`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "epsilon", "value", "class"])?;
        for (i, t) in self.targets.iter().enumerate() {
            w.write_record([
                i.to_string(),
                format!("{:.16e}", t.epsilon),
                format!("{:.16e}", t.value),
                t.class.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
