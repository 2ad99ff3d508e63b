//! Runtime distribution plots, one per group and dimension, with one curve
//! per algorithm.

use std::collections::{BTreeMap, BTreeSet};

use cmop_core::indicators::DEFAULT_TAU_STAR;
use cmop_core::runtimes::{build_erd, feasibility_line_data, log_evals_over_dim, Erd, FeasibilityLine};
use cmop_core::targets::targets_from_reference;
use cmop_core::{Result, TargetClass};
use log::warn;

use super::svg::{color, Frame, Svg};
use super::{csv_bytes, fmt_num};
use crate::experiment::suite_members;
use crate::store::{instance_key, write_atomic, Store};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grouping {
    Problem,
    Suite,
}

impl Grouping {
    fn dir(self) -> &'static str {
        match self {
            Grouping::Problem => "reports/erd/problem",
            Grouping::Suite => "reports/erd/suite",
        }
    }
}

/// Plotted points of one curve: a step function starting at one evaluation
/// with proportion 0 and extended to the budget.
pub fn erd_polyline(erd: &Erd) -> Vec<(f64, f64)> {
    let dim = erd.dim;
    let mut pts = vec![(log_evals_over_dim(1, dim), 0.0)];
    let mut level = 0.0;
    for (t, p) in &erd.steps {
        let x = log_evals_over_dim(*t, dim);
        pts.push((x, level));
        pts.push((x, *p));
        level = *p;
    }
    pts.push((log_evals_over_dim(erd.budget.max(1), dim), level));
    pts
}

/// Pixel frame shared by every plot of one dimension and budget.
pub fn erd_frame(dim: usize, budget: u64) -> Frame {
    let x_max = log_evals_over_dim(budget.max(1), dim).ceil().max(1.0);
    let x_min = log_evals_over_dim(1, dim).floor();
    Frame {
        x_range: (x_min, x_max),
        y_range: (0.0, 1.0),
        left: 60.0,
        top: 30.0,
        width: 480.0,
        height: 300.0,
    }
}

struct Curve {
    algorithm: String,
    erd: Erd,
    feasibility: FeasibilityLine,
}

fn render(title: &str, dim: usize, curves: &[Curve], minus_share: f64) -> String {
    let budget = curves.iter().map(|c| c.erd.budget).max().unwrap_or(1);
    let f = erd_frame(dim, budget);
    let mut svg = Svg::new(700.0, 380.0);
    let x_ticks: Vec<f64> = (f.x_range.0 as i64..=f.x_range.1 as i64).map(|k| k as f64).collect();
    svg.axes(
        &f,
        &x_ticks,
        &[0.0, 0.25, 0.5, 0.75, 1.0],
        "log10(evaluations / D)",
        "proportion of (target, run) pairs",
    );
    svg.text((f.left + f.width / 2.0, 18.0), title, 14.0, "middle");

    let y = f.py(minus_share);
    svg.line((f.left, y), (f.left + f.width, y), "#555", 1.0, Some("6,4"));
    for (i, c) in curves.iter().enumerate() {
        if let Some((a, b)) = c.feasibility.partial_range(c.erd.budget) {
            let (xa, xb) = (f.px(log_evals_over_dim(a, dim)), f.px(log_evals_over_dim(b, dim)));
            svg.line((xa, y), (xb, y), color(i), 4.0, None);
        }
    }
    for (i, c) in curves.iter().enumerate() {
        svg.polyline(&f.points_attr(&erd_polyline(&c.erd)), color(i), 1.5, &c.algorithm);
        let ly = f.top + 14.0 + 16.0 * i as f64;
        let lx = f.left + f.width + 12.0;
        svg.line((lx, ly - 4.0), (lx + 18.0, ly - 4.0), color(i), 2.0, None);
        svg.text((lx + 22.0, ly), &c.algorithm, 11.0, "start");
    }
    svg.finish()
}

/// Writes the curves, feasibility lines and plots of every group and
/// dimension; returns the written paths relative to the store.
pub fn emit_erd_report(store: &mut Store, grouping: Grouping) -> Result<BTreeSet<String>> {
    let config = store.manifest.config.clone();
    let groups: BTreeMap<String, Vec<String>> = match grouping {
        Grouping::Problem => config.problems.iter().map(|p| (p.clone(), vec![p.clone()])).collect(),
        Grouping::Suite => config.suites(),
    };
    let labels = config.labels();
    let mut written = BTreeSet::new();
    for dim in &config.dimensions {
        for (group, members) in &groups {
            let members = suite_members(store, members, *dim);
            let mut curves = Vec::new();
            let mut minus = (0usize, 0usize);
            for alg in &labels {
                let mut records = Vec::new();
                let mut traces = Vec::new();
                for p in &members {
                    records.extend(store.runtime_records(p, *dim, alg)?);
                    traces.extend(store.step_traces(p, *dim, alg)?);
                    let runs = store.cells(p, *dim, alg).len();
                    let inst = &store.manifest.instances[&instance_key(p, *dim)];
                    let targets = targets_from_reference(inst.hv_ref);
                    minus.0 += runs * targets.count(TargetClass::Minus);
                    minus.1 += runs * targets.len();
                }
                if records.is_empty() {
                    continue;
                }
                curves.push(Curve {
                    algorithm: alg.clone(),
                    erd: build_erd(&records, *dim)?,
                    feasibility: feasibility_line_data(&traces, DEFAULT_TAU_STAR),
                });
            }
            if curves.is_empty() {
                warn!("no runtime records for group {group} in dimension {dim}; skipped");
                continue;
            }
            let dir = format!("{}/D{dim}", grouping.dir());
            for c in &curves {
                let rows: Vec<Vec<String>> = erd_polyline(&c.erd)
                    .into_iter()
                    .map(|(x, p)| vec![fmt_num(x), fmt_num(p)])
                    .collect();
                let rel = format!("{dir}/{group}__{}.csv", c.algorithm);
                write_atomic(
                    &store.path(&rel),
                    &csv_bytes(&["log10_evals_over_D", "proportion"], &rows)?,
                )?;
                written.insert(rel);

                let rows: Vec<Vec<String>> = c
                    .feasibility
                    .steps()
                    .into_iter()
                    .map(|(t, q)| vec![fmt_num(log_evals_over_dim(t, *dim)), fmt_num(q)])
                    .collect();
                let rel = format!("{dir}/{group}__{}__feasibility.csv", c.algorithm);
                write_atomic(
                    &store.path(&rel),
                    &csv_bytes(&["log10_evals_over_D", "fraction_feasible"], &rows)?,
                )?;
                written.insert(rel);
            }
            let share = minus.0 as f64 / minus.1 as f64;
            let rel = format!("{dir}/{group}.svg");
            let title = format!("{group}, D = {dim}");
            write_atomic(&store.path(&rel), render(&title, *dim, &curves, share).as_bytes())?;
            written.insert(rel);
        }
    }
    store.replace_reports(grouping.dir(), written.clone())?;
    Ok(written)
}
