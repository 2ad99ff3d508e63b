//! Runtimes to reach targets and their empirical distributions.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::indicators::IndicatorState;
use crate::targets::{ScaleFactors, TargetSet};
use crate::types::Evaluation;

/// One improvement of the (scaled) indicator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPoint {
    pub eval_index: u64,
    pub value: f64,
}

/// Feeds evaluations into an [`IndicatorState`] and keeps the rows where the
/// scaled indicator improved.
#[derive(Debug, Clone)]
pub struct StepRecorder {
    state: IndicatorState,
    scales: ScaleFactors,
    steps: Vec<StepPoint>,
}

impl StepRecorder {
    pub fn new(state: IndicatorState, scales: ScaleFactors) -> Self {
        Self {
            state,
            scales,
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, e: &Evaluation) -> Result<()> {
        self.state.ingest(e)?;
        let value = self.current();
        if self.steps.last().is_none_or(|s| value < s.value) {
            self.steps.push(StepPoint {
                eval_index: e.eval_index,
                value,
            });
        }
        Ok(())
    }

    pub fn current(&self) -> f64 {
        self.state.scaled_value(self.scales.d_scale, self.scales.v_scale)
    }

    pub fn state(&self) -> &IndicatorState {
        &self.state
    }

    pub fn steps(&self) -> &[StepPoint] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<StepPoint> {
        self.steps
    }
}

pub fn write_steps_csv<W: Write>(steps: &[StepPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["eval_index", "i_cmop"])?;
    for s in steps {
        w.write_record([s.eval_index.to_string(), format!("{:.16e}", s.value)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_steps_csv<R: Read>(input: R, origin: &str) -> Result<Vec<StepPoint>> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().collect::<Vec<_>>() != ["eval_index", "i_cmop"] {
        return Err(Error::format(origin, "unexpected header"));
    }
    r.records()
        .map(|rec| {
            let rec = rec?;
            let eval_index = rec[0]
                .parse()
                .map_err(|_| Error::format(origin, format!("bad index `{}`", &rec[0])))?;
            let value = rec[1]
                .parse()
                .map_err(|_| Error::format(origin, format!("bad value `{}`", &rec[1])))?;
            Ok(StepPoint { eval_index, value })
        })
        .collect()
}

/// Identifies a single run.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RunId {
    pub problem: String,
    pub algorithm: String,
    pub run_index: u32,
}

/// First-hit evaluation counts of one run, one entry per target; `None`
/// marks a target that was never reached.
#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeRecord {
    pub id: RunId,
    pub budget: u64,
    pub runtimes: Vec<Option<u64>>,
}

impl RuntimeRecord {
    pub fn reached(&self) -> usize {
        self.runtimes.iter().filter(|r| r.is_some()).count()
    }

    /// Writes `target_index,runtime` with an empty field for missing
    /// runtimes.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["target_index", "runtime"])?;
        for (i, r) in self.runtimes.iter().enumerate() {
            let cell = r.map(|t| t.to_string()).unwrap_or_default();
            w.write_record([i.to_string(), cell])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R, id: RunId, budget: u64, origin: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        if r.headers()?.iter().collect::<Vec<_>>() != ["target_index", "runtime"] {
            return Err(Error::format(origin, "unexpected header"));
        }
        let mut runtimes = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            if rec[0].parse::<usize>().ok() != Some(i) {
                return Err(Error::format(origin, format!("row {i} has index `{}`", &rec[0])));
            }
            runtimes.push(if rec[1].is_empty() {
                None
            } else {
                Some(
                    rec[1]
                        .parse()
                        .map_err(|_| Error::format(origin, format!("bad runtime `{}`", &rec[1])))?,
                )
            });
        }
        Ok(Self { id, budget, runtimes })
    }
}

/// Runtime of each target: the smallest evaluation index whose indicator is
/// at or below the target value.
pub fn extract_runtimes(id: RunId, steps: &[StepPoint], targets: &TargetSet, budget: u64) -> Result<RuntimeRecord> {
    if let Some(w) = steps.windows(2).find(|w| w[1].eval_index <= w[0].eval_index) {
        return Err(Error::Sequencing(format!(
            "trace index {} follows {}",
            w[1].eval_index, w[0].eval_index
        )));
    }
    // running minimum makes the lookup valid for any trace, not only
    // improvement rows
    let mut best = f64::INFINITY;
    let prefix_min: Vec<(u64, f64)> = steps
        .iter()
        .take_while(|s| s.eval_index <= budget)
        .map(|s| {
            best = best.min(s.value);
            (s.eval_index, best)
        })
        .collect();
    let runtimes = targets
        .values()
        .iter()
        .map(|t| {
            let k = prefix_min.partition_point(|(_, v)| v > t);
            prefix_min.get(k).map(|(i, _)| *i)
        })
        .collect();
    Ok(RuntimeRecord { id, budget, runtimes })
}

/// Empirical runtime distribution over pooled (target, run) pairs.
///
/// Abscissae are raw evaluation counts; [`Erd::points`] converts them to
/// `log10(evals / D)` for presentation.
#[derive(Debug, Clone, PartialEq)]
pub struct Erd {
    pub dim: usize,
    pub budget: u64,
    /// Number of (target, run) pairs.
    pub denominator: usize,
    /// `(evaluations, proportion)` at every evaluation count where the
    /// proportion increases.
    pub steps: Vec<(u64, f64)>,
}

impl Erd {
    /// Proportion of pairs reached within `evals` evaluations.
    pub fn proportion_at(&self, evals: u64) -> f64 {
        let k = self.steps.partition_point(|(t, _)| *t <= evals);
        if k == 0 {
            0.0
        } else {
            self.steps[k - 1].1
        }
    }

    pub fn final_proportion(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.1)
    }

    /// `(log10(evals / D), proportion)` pairs.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.steps
            .iter()
            .map(|(t, p)| (log_evals_over_dim(*t, self.dim), *p))
            .collect()
    }
}

pub fn log_evals_over_dim(evals: u64, dim: usize) -> f64 {
    (evals as f64 / dim as f64).log10()
}

/// Pools the runtimes of all records; missing runtimes are never counted.
pub fn build_erd(records: &[RuntimeRecord], dim: usize) -> Result<Erd> {
    let Some(first) = records.first() else {
        return Err(Error::Aggregation("no runtime records to aggregate".into()));
    };
    let n = first.runtimes.len();
    if let Some(r) = records.iter().find(|r| r.runtimes.len() != n) {
        return Err(Error::Aggregation(format!(
            "record {:?} has {} targets, expected {n}",
            r.id,
            r.runtimes.len()
        )));
    }
    let denominator = n * records.len();
    let mut hits: Vec<u64> = records
        .iter()
        .flat_map(|r| r.runtimes.iter().flatten().copied())
        .collect();
    hits.sort_unstable();
    let mut steps: Vec<(u64, f64)> = Vec::new();
    for (i, t) in hits.iter().enumerate() {
        let p = (i + 1) as f64 / denominator as f64;
        match steps.last_mut() {
            Some(last) if last.0 == *t => last.1 = p,
            _ => steps.push((*t, p)),
        }
    }
    Ok(Erd {
        dim,
        budget: records.iter().map(|r| r.budget).max().unwrap_or(0),
        denominator,
        steps,
    })
}

/// Per-budget fraction of runs that have reached the feasible region.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityLine {
    /// First evaluation with indicator at or below the threshold, per run.
    pub first_feasible: Vec<Option<u64>>,
}

impl FeasibilityLine {
    pub fn fraction_at(&self, evals: u64) -> f64 {
        if self.first_feasible.is_empty() {
            return 0.0;
        }
        let hit = self
            .first_feasible
            .iter()
            .filter(|f| f.is_some_and(|t| t <= evals))
            .count();
        hit as f64 / self.first_feasible.len() as f64
    }

    /// `(evaluations, fraction)` at each change of the fraction.
    pub fn steps(&self) -> Vec<(u64, f64)> {
        let mut times: Vec<u64> = self.first_feasible.iter().flatten().copied().collect();
        times.sort_unstable();
        times.dedup();
        times.into_iter().map(|t| (t, self.fraction_at(t))).collect()
    }

    /// Evaluation range over which some, but not all, runs are feasible.
    pub fn partial_range(&self, budget: u64) -> Option<(u64, u64)> {
        let times: Vec<Option<u64>> = self.first_feasible.clone();
        let first = times.iter().flatten().min().copied()?;
        let all = if times.iter().all(Option::is_some) {
            times.iter().flatten().max().copied()
        } else {
            None
        };
        match all {
            Some(last) if last == first => None,
            Some(last) => Some((first, last)),
            None => Some((first, budget)),
        }
    }
}

pub fn feasibility_line_data(traces: &[Vec<StepPoint>], tau_star: f64) -> FeasibilityLine {
    FeasibilityLine {
        first_feasible: traces
            .iter()
            .map(|steps| steps.iter().find(|s| s.value <= tau_star).map(|s| s.eval_index))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{builtin, HOLE};
    use crate::targets::make_targets;

    fn id() -> RunId {
        RunId {
            problem: "P".into(),
            algorithm: "A".into(),
            run_index: 0,
        }
    }

    fn steps(rows: &[(u64, f64)]) -> Vec<StepPoint> {
        rows.iter()
            .map(|(i, v)| StepPoint {
                eval_index: *i,
                value: *v,
            })
            .collect()
    }

    fn targets() -> TargetSet {
        make_targets(builtin(HOLE, 2).unwrap().meta()).unwrap()
    }

    fn record(rt: &[Option<u64>]) -> RuntimeRecord {
        RuntimeRecord {
            id: id(),
            budget: 100,
            runtimes: rt.to_vec(),
        }
    }

    fn lookup(trace: &[StepPoint], t: f64) -> Option<u64> {
        let probe = TargetSet {
            targets: vec![crate::targets::Target {
                epsilon: 0.0,
                value: t,
                class: crate::targets::TargetClass::Plus,
            }],
            ..targets()
        };
        extract_runtimes(id(), trace, &probe, 1000).unwrap().runtimes[0]
    }

    #[test]
    fn runtime_lookup_rule() {
        let trace = steps(&[(1, 1.5), (10, 0.8), (50, -0.2)]);
        assert_eq!(lookup(&trace, 0.9), Some(10));
        assert_eq!(lookup(&trace, -0.5), None);
        // equality counts as reached
        assert_eq!(lookup(&trace, 0.8), Some(10));
        assert_eq!(lookup(&trace, 2.0), Some(1));
    }

    #[test]
    fn unsorted_trace_is_rejected() {
        let trace = steps(&[(10, 0.8), (5, 0.2)]);
        assert!(matches!(
            extract_runtimes(id(), &trace, &targets(), 100),
            Err(Error::Sequencing(_))
        ));
    }

    #[test]
    fn runtimes_are_nested() {
        let trace = steps(&[(1, 1.3), (40, 0.9), (70, -0.1), (90, -0.45)]);
        let rec = extract_runtimes(id(), &trace, &targets(), 100).unwrap();
        // targets increase in value, so runtimes never increase with index
        let present: Vec<u64> = rec.runtimes.iter().flatten().copied().collect();
        assert!(present.windows(2).all(|w| w[0] >= w[1]));
        assert!(rec.runtimes.iter().flatten().all(|t| *t <= 100));
    }

    #[test]
    fn erd_examples() {
        let erd = build_erd(&[record(&[Some(3), None])], 5).unwrap();
        assert_eq!(erd.final_proportion(), 0.5);
        assert_eq!(erd.proportion_at(2), 0.0);
        assert_eq!(erd.proportion_at(3), 0.5);

        let a = record(&[Some(3), Some(7), None, Some(7)]);
        let one = build_erd(std::slice::from_ref(&a), 5).unwrap();
        let two = build_erd(&[a.clone(), a.clone()], 5).unwrap();
        assert_eq!(one.steps, two.steps);
        assert_eq!(two.denominator, 8);

        let b = record(&[Some(1), None, None, None]);
        let pooled = build_erd(&[a, b], 5).unwrap();
        assert_eq!(pooled.denominator, 8);
        assert_eq!(pooled.final_proportion(), 4.0 / 8.0);
        assert_eq!(pooled.steps[0], (1, 1.0 / 8.0));

        assert!(matches!(
            build_erd(&[record(&[Some(1)]), record(&[Some(1), None])], 5),
            Err(Error::Aggregation(_))
        ));
    }

    #[test]
    fn erd_points_use_log_evals_over_dim() {
        let erd = build_erd(&[record(&[Some(50), Some(500)])], 5).unwrap();
        let pts = erd.points();
        assert!((pts[0].0 - 1.0).abs() < 1e-15);
        assert!((pts[1].0 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn feasibility_fractions() {
        let feasible_at_start = vec![steps(&[(1, 0.5)]); 4];
        let line = feasibility_line_data(&feasible_at_start, 1.0);
        assert_eq!(line.fraction_at(1), 1.0);
        assert_eq!(line.partial_range(100), None);

        let never = vec![steps(&[(1, 1.5), (30, 1.2)]); 3];
        let line = feasibility_line_data(&never, 1.0);
        assert_eq!(line.fraction_at(10_000), 0.0);
        assert_eq!(line.partial_range(100), None);

        let mut mixed = vec![steps(&[(1, 1.5)]); 7];
        for t in [20, 40, 60] {
            mixed.push(steps(&[(1, 1.5), (t, 1.0)]));
        }
        let line = feasibility_line_data(&mixed, 1.0);
        assert!((line.fraction_at(60) - 0.3).abs() < 1e-15);
        assert!((line.fraction_at(40) - 0.2).abs() < 1e-15);
        assert_eq!(line.partial_range(100), Some((20, 100)));
    }

    #[test]
    fn csv_round_trip() {
        let rec = record(&[Some(3), None, Some(1)]);
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text, "target_index,runtime\n0,3\n1,\n2,1\n");
        let back = RuntimeRecord::read_csv(&buf[..], id(), 100, "mem").unwrap();
        assert_eq!(back, rec);

        let trace = steps(&[(1, 1.5), (10, 0.1 + 0.2)]);
        let mut buf = Vec::new();
        write_steps_csv(&trace, &mut buf).unwrap();
        assert_eq!(read_steps_csv(&buf[..], "mem").unwrap(), trace);
    }
}
