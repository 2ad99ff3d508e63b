//! Exact hypervolume w.r.t. the reference point (1, ..., 1) for two and three
//! objectives.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::pareto::strictly_below_reference;

/// Lebesgue measure of the region dominated by `points` and bounded by
/// `(1, ..., 1)`. Points that are not strictly below 1 in every coordinate
/// contribute nothing.
pub fn hypervolume(points: &[Vec<f64>], n_obj: usize) -> Result<f64> {
    if !(2..=3).contains(&n_obj) {
        return Err(Error::Unsupported(format!(
            "exact hypervolume is implemented for 2 or 3 objectives, not {n_obj}"
        )));
    }
    if let Some(p) = points.iter().find(|p| p.len() != n_obj) {
        return Err(Error::Domain(format!(
            "point of dimension {} in a {n_obj}-objective hypervolume",
            p.len()
        )));
    }
    let mut inside: Vec<&[f64]> = points
        .iter()
        .map(Vec::as_slice)
        .filter(|p| strictly_below_reference(p))
        .collect();
    Ok(match n_obj {
        2 => sweep_2d(&mut inside),
        _ => slice_3d(&mut inside),
    })
}

fn by_coord(k: usize) -> impl Fn(&&[f64], &&[f64]) -> Ordering {
    move |a, b| a[k].total_cmp(&b[k])
}

/// Sort by the first objective and accumulate the rectangles that each new
/// staircase step adds.
fn sweep_2d(points: &mut [&[f64]]) -> f64 {
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut floor = 1.0;
    for p in points.iter() {
        if p[1] < floor {
            area += (1.0 - p[0]) * (floor - p[1]);
            floor = p[1];
        }
    }
    area
}

/// Sweep along the third objective; each slab between consecutive values is
/// a prism over the 2-D hypervolume of the points seen so far.
fn slice_3d(points: &mut [&[f64]]) -> f64 {
    points.sort_by(by_coord(2));
    let mut volume = 0.0;
    // 2-D nondominated staircase of the projections, sorted by f1
    let mut stairs: Vec<[f64; 2]> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        insert_stair(&mut stairs, [p[0], p[1]]);
        let z_next = points.get(i + 1).map_or(1.0, |q| q[2]);
        let depth = z_next - p[2];
        if depth > 0.0 {
            volume += depth * staircase_area(&stairs);
        }
    }
    volume
}

fn insert_stair(stairs: &mut Vec<[f64; 2]>, p: [f64; 2]) {
    let idx = stairs.partition_point(|q| q[0] < p[0]);
    if idx > 0 && stairs[idx - 1][1] <= p[1] {
        return;
    }
    if idx < stairs.len() && stairs[idx][0] == p[0] && stairs[idx][1] <= p[1] {
        return;
    }
    let mut end = idx;
    while end < stairs.len() && stairs[end][1] >= p[1] {
        end += 1;
    }
    stairs.splice(idx..end, std::iter::once(p));
}

fn staircase_area(stairs: &[[f64; 2]]) -> f64 {
    let mut area = 0.0;
    for (i, p) in stairs.iter().enumerate() {
        let x_next = stairs.get(i + 1).map_or(1.0, |q| q[0]);
        area += (x_next - p[0]) * (1.0 - p[1]);
    }
    area
}
