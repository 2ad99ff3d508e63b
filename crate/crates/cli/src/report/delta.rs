//! Pairwise runtime-profile differences between algorithms, as a table per
//! dimension and a distribution plot per suite.

use std::collections::{BTreeMap, BTreeSet};

use cmop_core::delta::{delta_matrix, pool_distribution, DeltaCell, DeltaDistribution, ProblemRuntimes};
use cmop_core::targets::targets_from_reference;
use cmop_core::{Error, Result};
use log::warn;

use super::svg::{color, Frame, Svg};
use super::{csv_bytes, fmt_num};
use crate::experiment::suite_members;
use crate::store::{instance_key, write_atomic, Store};

const DIR: &str = "reports/delta";

/// Panel order in the plot.
pub const PANELS: [&str; 3] = ["delta_plus", "delta_minus", "delta"];

fn problem_runtimes(store: &Store, problem: &str, dim: usize, labels: &[String]) -> Result<ProblemRuntimes> {
    let inst = &store.manifest.instances[&instance_key(problem, dim)];
    let mut runs = BTreeMap::new();
    let mut budget = None;
    for alg in labels {
        let cells = store.cells(problem, dim, alg);
        for c in &cells {
            match budget {
                None => budget = Some(c.budget),
                Some(b) if b != c.budget => {
                    return Err(Error::Aggregation(format!(
                        "{problem} D{dim}: budgets {b} and {} differ across algorithms",
                        c.budget
                    )))
                }
                _ => {}
            }
        }
        if !cells.is_empty() {
            runs.insert(alg.clone(), store.runtime_records(problem, dim, alg)?);
        }
    }
    Ok(ProblemRuntimes {
        problem: problem.to_string(),
        targets: targets_from_reference(inst.hv_ref),
        budget: budget.unwrap_or(0),
        runs,
    })
}

/// Five-number summary with linear interpolation between order statistics.
pub fn quartiles(values: &[f64]) -> Option<[f64; 5]> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let h = p * (v.len() - 1) as f64;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        v[lo] + (h - lo as f64) * (v[hi] - v[lo])
    };
    Some([v[0], q(0.25), q(0.5), q(0.75), v[v.len() - 1]])
}

/// Pixel frame of panel `i`; all panels share the y range `[0, 1]`.
pub fn panel_frame(i: usize) -> Frame {
    Frame {
        x_range: (0.0, 1.0),
        y_range: (0.0, 1.0),
        left: 60.0 + 170.0 * i as f64,
        top: 30.0,
        width: 140.0,
        height: 300.0,
    }
}

/// Horizontal jitter of the `k`-th dot; deterministic so plots are
/// reproducible.
fn jitter(k: usize) -> f64 {
    0.3 + 0.4 * ((k as f64 * 0.618_033_988_749_895) % 1.0)
}

fn render(title: &str, dist: &DeltaDistribution) -> String {
    let mut svg = Svg::new(580.0, 380.0);
    svg.text((290.0, 18.0), title, 14.0, "middle");
    let pair_index: BTreeMap<(String, String), usize> = dist
        .labels
        .iter()
        .map(|(_, a, b)| (a.clone(), b.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    for (i, (name, values)) in PANELS
        .iter()
        .zip([&dist.delta_plus, &dist.delta_minus, &dist.delta])
        .enumerate()
    {
        let f = panel_frame(i);
        let y_ticks: &[f64] = if i == 0 { &[0.0, 0.25, 0.5, 0.75, 1.0] } else { &[] };
        svg.axes(&f, &[], y_ticks, name, if i == 0 { "difference" } else { "" });
        if let Some([lo, q1, med, q3, hi]) = quartiles(values) {
            let (xa, xb) = (f.px(0.2), f.px(0.8));
            svg.rect((xa, f.py(q3)), (xb - xa, f.py(q1) - f.py(q3)), "#444");
            svg.line((xa, f.py(med)), (xb, f.py(med)), "#000", 2.0, None);
            let xm = f.px(0.5);
            svg.line((xm, f.py(q3)), (xm, f.py(hi)), "#444", 1.0, None);
            svg.line((xm, f.py(q1)), (xm, f.py(lo)), "#444", 1.0, None);
        }
        for (k, (v, (_, a, b))) in values.iter().zip(&dist.labels).enumerate() {
            let c = color(pair_index[&(a.clone(), b.clone())]);
            svg.circle((f.px(jitter(k)), f.py(*v)), 3.0, c);
        }
    }
    for ((a, b), i) in &pair_index {
        let x = 60.0 + 170.0 * *i as f64;
        svg.circle((x, 346.0), 3.0, color(*i));
        svg.text((x + 8.0, 350.0), &format!("{a} vs {b}"), 11.0, "start");
    }
    svg.finish()
}

fn cell_row(c: &DeltaCell, full: bool) -> Vec<String> {
    let r = &c.result;
    let mut row = vec![
        c.problem.clone(),
        c.alg_a.clone(),
        c.alg_b.clone(),
        fmt_num(r.delta),
        fmt_num(r.delta_plus),
        fmt_num(r.delta_minus),
    ];
    if full {
        row.extend([r.n.to_string(), r.n_plus.to_string(), r.n_minus.to_string()]);
    }
    row
}

/// Writes the pairwise table of each dimension and the distribution of each
/// suite; returns the written paths relative to the store.
pub fn emit_delta_report(store: &mut Store) -> Result<BTreeSet<String>> {
    let config = store.manifest.config.clone();
    let labels = config.labels();
    if labels.len() < 2 {
        return Err(Error::Config(format!(
            "pairwise differences need at least two algorithms, the store has {}",
            labels.len()
        )));
    }
    let all: Vec<String> = config.problems.clone();
    let mut written = BTreeSet::new();
    for dim in &config.dimensions {
        let problems = suite_members(store, &all, *dim);
        let runtimes = problems
            .iter()
            .map(|p| problem_runtimes(store, p, *dim, &labels))
            .collect::<Result<Vec<_>>>()?;
        let cells = delta_matrix(&runtimes, &labels)?;
        let dir = format!("{DIR}/D{dim}");

        let rows: Vec<Vec<String>> = cells.iter().map(|c| cell_row(c, true)).collect();
        let rel = format!("{dir}/delta.csv");
        let header = [
            "problem",
            "alg_a",
            "alg_b",
            "delta",
            "delta_plus",
            "delta_minus",
            "n",
            "n_plus",
            "n_minus",
        ];
        write_atomic(&store.path(&rel), &csv_bytes(&header, &rows)?)?;
        written.insert(rel);

        for (suite, members) in config.suites() {
            let members: BTreeSet<String> = members.into_iter().collect();
            let dist = pool_distribution(&cells, |p| members.contains(p));
            if dist.is_empty() {
                warn!("suite {suite} has no results in dimension {dim}; skipped");
                continue;
            }
            let rows: Vec<Vec<String>> = cells
                .iter()
                .filter(|c| members.contains(&c.problem))
                .map(|c| cell_row(c, false))
                .collect();
            let rel = format!("{dir}/violin__{suite}.csv");
            write_atomic(&store.path(&rel), &csv_bytes(&header[..6], &rows)?)?;
            written.insert(rel);

            let rel = format!("{dir}/violin__{suite}.svg");
            let title = format!("{suite}, D = {dim}");
            write_atomic(&store.path(&rel), render(&title, &dist).as_bytes())?;
            written.insert(rel);
        }
    }
    store.replace_reports(DIR, written.clone())?;
    Ok(written)
}
