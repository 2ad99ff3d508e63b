//! Normalized area between the runtime distributions of two algorithms on
//! one problem, split by target class.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::runtimes::RuntimeRecord;
use crate::targets::{TargetClass, TargetSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaResult {
    pub delta: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    /// Number of (target, run) pairs.
    pub n: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    pub budget: u64,
}

/// Logarithm used for the ratio terms; the result does not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBase {
    Natural,
    Ten,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Ten => x.log10(),
        }
    }
}

pub fn delta_pair(a: &[RuntimeRecord], b: &[RuntimeRecord], targets: &TargetSet, budget: u64) -> Result<DeltaResult> {
    delta_pair_in_base(a, b, targets, budget, LogBase::Natural)
}

/// Pools the runtimes of each target class over all runs (missing runtimes
/// count as the budget), sorts both pools and sums the absolute log ratios
/// of rank-matched entries.
pub fn delta_pair_in_base(
    a: &[RuntimeRecord],
    b: &[RuntimeRecord],
    targets: &TargetSet,
    budget: u64,
    base: LogBase,
) -> Result<DeltaResult> {
    if budget <= 1 {
        return Err(Error::Config(format!("budget must exceed 1, got {budget}")));
    }
    if a.is_empty() || a.len() != b.len() {
        return Err(Error::Comparison(format!(
            "run counts differ or are zero: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    for r in a.iter().chain(b) {
        if r.runtimes.len() != targets.len() {
            return Err(Error::Comparison(format!(
                "record {:?} has {} runtimes for {} targets",
                r.id,
                r.runtimes.len(),
                targets.len()
            )));
        }
        if let Some(t) = r.runtimes.iter().flatten().find(|t| **t == 0 || **t > budget) {
            return Err(Error::Comparison(format!(
                "record {:?} has runtime {t} outside [1, {budget}]",
                r.id
            )));
        }
    }
    let runs = a.len();
    let log_budget = base.log(budget as f64);
    let class_delta = |class: TargetClass| -> (f64, usize) {
        let pool = |records: &[RuntimeRecord]| -> Vec<u64> {
            let mut v: Vec<u64> = records
                .iter()
                .flat_map(|r| {
                    r.runtimes
                        .iter()
                        .zip(targets.targets())
                        .filter(|(_, t)| t.class == class)
                        .map(|(rt, _)| rt.unwrap_or(budget))
                })
                .collect();
            v.sort_unstable();
            v
        };
        let (pa, pb) = (pool(a), pool(b));
        let n = pa.len();
        if n == 0 {
            return (0.0, 0);
        }
        let area: f64 = pa
            .iter()
            .zip(&pb)
            .map(|(x, y)| (base.log(*x as f64) - base.log(*y as f64)).abs() / log_budget)
            .sum();
        debug_assert_eq!(n, targets.count(class) * runs);
        (area / n as f64, n)
    };
    let (delta_plus, n_plus) = class_delta(TargetClass::Plus);
    let (delta_minus, n_minus) = class_delta(TargetClass::Minus);
    let n = n_plus + n_minus;
    Ok(DeltaResult {
        delta: (n_minus as f64 * delta_minus + n_plus as f64 * delta_plus) / n as f64,
        delta_plus,
        delta_minus,
        n,
        n_plus,
        n_minus,
        budget,
    })
}

/// All runs of every algorithm on one problem.
#[derive(Debug, Clone)]
pub struct ProblemRuntimes {
    pub problem: String,
    pub targets: TargetSet,
    pub budget: u64,
    /// Runs keyed by algorithm name.
    pub runs: BTreeMap<String, Vec<RuntimeRecord>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaCell {
    pub problem: String,
    pub alg_a: String,
    pub alg_b: String,
    pub result: DeltaResult,
}

/// One result per problem and unordered algorithm pair, pairs taken in the
/// order of `algorithms`.
pub fn delta_matrix(problems: &[ProblemRuntimes], algorithms: &[String]) -> Result<Vec<DeltaCell>> {
    if algorithms.len() < 2 {
        return Err(Error::Config(format!(
            "at least two algorithms are needed, got {}",
            algorithms.len()
        )));
    }
    let missing: Vec<String> = problems
        .iter()
        .flat_map(|p| {
            algorithms
                .iter()
                .filter(|a| p.runs.get(*a).is_none_or(Vec::is_empty))
                .map(move |a| format!("({}, {a})", p.problem))
        })
        .collect();
    if !missing.is_empty() {
        return Err(Error::Aggregation(format!("no runs for {}", missing.join(", "))));
    }
    let mut cells = Vec::new();
    for p in problems {
        for (i, a) in algorithms.iter().enumerate() {
            for b in &algorithms[i + 1..] {
                let result = delta_pair(&p.runs[a], &p.runs[b], &p.targets, p.budget)?;
                cells.push(DeltaCell {
                    problem: p.problem.clone(),
                    alg_a: a.clone(),
                    alg_b: b.clone(),
                    result,
                });
            }
        }
    }
    Ok(cells)
}

/// Pooled per-cell values of one suite, one entry per (problem, pair).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DeltaDistribution {
    pub labels: Vec<(String, String, String)>,
    pub delta: Vec<f64>,
    pub delta_plus: Vec<f64>,
    pub delta_minus: Vec<f64>,
}

impl DeltaDistribution {
    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }
}

/// Collects the cells whose problem satisfies `member`.
pub fn pool_distribution(cells: &[DeltaCell], member: impl Fn(&str) -> bool) -> DeltaDistribution {
    let mut d = DeltaDistribution::default();
    for c in cells.iter().filter(|c| member(&c.problem)) {
        d.labels.push((c.problem.clone(), c.alg_a.clone(), c.alg_b.clone()));
        d.delta.push(c.result.delta);
        d.delta_plus.push(c.result.delta_plus);
        d.delta_minus.push(c.result.delta_minus);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{builtin, HOLE};
    use crate::runtimes::RunId;
    use crate::targets::make_targets;

    fn targets() -> TargetSet {
        make_targets(builtin(HOLE, 2).unwrap().meta()).unwrap()
    }

    fn rec(alg: &str, run: u32, runtimes: Vec<Option<u64>>) -> RuntimeRecord {
        RuntimeRecord {
            id: RunId {
                problem: HOLE.into(),
                algorithm: alg.into(),
                run_index: run,
            },
            budget: 1000,
            runtimes,
        }
    }

    #[test]
    fn extremes() {
        let t = targets();
        let all = rec("a", 0, vec![Some(1); 102]);
        let none = rec("b", 0, vec![None; 102]);
        let d = delta_pair(std::slice::from_ref(&all), &[none], &t, 1000).unwrap();
        assert_eq!(d.delta, 1.0);
        assert_eq!(d.delta_plus, 1.0);
        assert_eq!(d.delta_minus, 1.0);
        let d = delta_pair(std::slice::from_ref(&all), std::slice::from_ref(&all), &t, 1000).unwrap();
        assert_eq!((d.delta, d.delta_plus, d.delta_minus), (0.0, 0.0, 0.0));
    }

    #[test]
    fn single_target_ratio() {
        let t = TargetSet {
            targets: vec![targets().targets()[0]],
            ..targets()
        };
        let d = delta_pair(
            &[rec("a", 0, vec![Some(10)])],
            &[rec("b", 0, vec![Some(100)])],
            &t,
            1000,
        )
        .unwrap();
        assert!((d.delta - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!((d.n, d.n_plus, d.n_minus), (1, 1, 0));
        assert_eq!(d.delta_minus, 0.0);
    }

    #[test]
    fn class_split_is_weighted() {
        let t = targets();
        // minus targets differ by one decade, plus targets coincide
        let mut a = vec![Some(100); 102];
        let mut b = vec![Some(100); 102];
        for i in 51..102 {
            a[i] = Some(10);
            b[i] = Some(100);
        }
        let d = delta_pair(&[rec("a", 0, a)], &[rec("b", 0, b)], &t, 1000).unwrap();
        assert!((d.delta_minus - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.delta_plus, 0.0);
        assert!((d.delta - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let t = targets();
        let a = rec("a", 0, vec![Some(1); 102]);
        assert!(matches!(
            delta_pair(std::slice::from_ref(&a), std::slice::from_ref(&a), &t, 1),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            delta_pair(std::slice::from_ref(&a), &[a.clone(), a.clone()], &t, 1000),
            Err(Error::Comparison(_))
        ));
        let short = rec("b", 0, vec![Some(1); 50]);
        assert!(matches!(
            delta_pair(std::slice::from_ref(&a), &[short], &t, 1000),
            Err(Error::Comparison(_))
        ));
        let over = rec("b", 0, vec![Some(2000); 102]);
        assert!(matches!(delta_pair(&[a], &[over], &t, 1000), Err(Error::Comparison(_))));
    }

    fn grid(algs: &[&str]) -> ProblemRuntimes {
        let runs = algs
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let rt = (0..102).map(|i| Some(1 + (i as u64 * (k as u64 + 1)) % 900)).collect();
                (a.to_string(), vec![rec(a, 0, rt)])
            })
            .collect();
        ProblemRuntimes {
            problem: HOLE.into(),
            targets: targets(),
            budget: 1000,
            runs,
        }
    }

    #[test]
    fn matrix_covers_unordered_pairs() {
        let algs: Vec<String> = ["x", "y", "z"].map(String::from).to_vec();
        let cells = delta_matrix(&[grid(&["x", "y", "z"])], &algs).unwrap();
        assert_eq!(cells.len(), 3);
        for c in &cells {
            let p = grid(&["x", "y", "z"]);
            let back = delta_pair(&p.runs[&c.alg_b], &p.runs[&c.alg_a], &p.targets, 1000).unwrap();
            assert_eq!(back, c.result);
        }
        let dist = pool_distribution(&cells, |_| true);
        assert_eq!(dist.len(), 3);
        assert!(pool_distribution(&cells, |p| p == "other").is_empty());
    }

    #[test]
    fn matrix_reports_missing_cells() {
        let algs: Vec<String> = ["x", "y", "w"].map(String::from).to_vec();
        let err = delta_matrix(&[grid(&["x", "y"])], &algs).unwrap_err();
        assert!(err.to_string().contains("(HOLE, w)"), "{err}");
        assert!(matches!(
            delta_matrix(&[grid(&["x"])], &algs[..1]),
            Err(Error::Config(_))
        ));
    }
}
