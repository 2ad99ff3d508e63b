//! Independent reference implementations used only by tests.
#![allow(dead_code)]

use cmop_core::indicators::{distance_to_roi, hypervolume};
use cmop_core::targets::TargetClass;
use cmop_core::Evaluation;

/// The constrained indicator recomputed from scratch over all evaluations
/// of a prefix, without any archive.
pub fn batch_i_cmop(prefix: &[Evaluation], n_obj: usize) -> f64 {
    let feasible: Vec<Vec<f64>> = prefix.iter().filter(|e| e.v == 0.0).map(|e| e.f.clone()).collect();
    if feasible.is_empty() {
        let v = prefix.iter().map(|e| e.v).fold(f64::INFINITY, f64::min);
        return v + 1.0;
    }
    let inside = feasible.iter().any(|p| p.iter().all(|x| *x < 1.0));
    let mop = if inside {
        -hypervolume(&feasible, n_obj).unwrap()
    } else {
        distance_to_roi(&feasible).unwrap()
    };
    mop.min(1.0)
}

/// Exact 2-D hypervolume by coordinate compression: sums every grid cell
/// whose lower corner is weakly dominated.
pub fn compressed_hv_2d(points: &[Vec<f64>]) -> f64 {
    let pts: Vec<&Vec<f64>> = points.iter().filter(|p| p[0] < 1.0 && p[1] < 1.0).collect();
    let mut xs: Vec<f64> = pts.iter().map(|p| p[0]).chain([1.0]).collect();
    let mut ys: Vec<f64> = pts.iter().map(|p| p[1]).chain([1.0]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let mut area = 0.0;
    for i in 0..xs.len() - 1 {
        for j in 0..ys.len() - 1 {
            if pts.iter().any(|p| p[0] <= xs[i] && p[1] <= ys[j]) {
                area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
            }
        }
    }
    area
}

/// Fronts by repeated extraction of the undominated remainder.
pub fn brute_force_fronts<T>(items: &[T], better: impl Fn(&T, &T) -> bool) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..items.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|i| !remaining.iter().any(|j| better(&items[*j], &items[*i])))
            .collect();
        remaining.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// Target-by-target normalized log-ratio sums of two single runs:
/// `(delta, delta_plus, delta_minus)`.
pub fn direct_single_run_delta(
    a: &[Option<u64>],
    b: &[Option<u64>],
    classes: &[TargetClass],
    budget: u64,
) -> (f64, f64, f64) {
    let nf = budget as f64;
    let part = |class: TargetClass| {
        let idx: Vec<usize> = (0..a.len()).filter(|i| classes[*i] == class).collect();
        let sum: f64 = idx
            .iter()
            .map(|i| {
                let ta = a[*i].map_or(nf, |t| t as f64);
                let tb = b[*i].map_or(nf, |t| t as f64);
                (ta / tb).ln().abs()
            })
            .sum();
        (sum / (idx.len() as f64 * nf.ln()), idx.len())
    };
    let (dp, np) = part(TargetClass::Plus);
    let (dm, nm) = part(TargetClass::Minus);
    ((np as f64 * dp + nm as f64 * dm) / (np + nm) as f64, dp, dm)
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}
