use crate::error::{Error, Result};
use crate::indicators::{hypervolume, point_distance_to_roi};
use crate::pareto::{strictly_below_reference, weakly_dominates};
use crate::types::Evaluation;

/// Threshold separating feasible from infeasible indicator values.
pub const DEFAULT_TAU_STAR: f64 = 1.0;

/// Incremental anytime state of the constrained indicator over a run.
///
/// Feasible solutions feed a nondominated archive (duplicates stored once)
/// whose hypervolume is maintained incrementally; infeasible solutions only
/// lower the smallest violation seen. Every quantity is monotone, so the
/// indicator never increases as evaluations are appended.
#[derive(Debug, Clone)]
pub struct IndicatorState {
    n_obj: usize,
    tau_star: f64,
    count: u64,
    /// Nondominated feasible normalized objective vectors. For two
    /// objectives the archive is kept sorted by the first objective.
    archive: Vec<Vec<f64>>,
    min_violation: f64,
    min_distance: f64,
    hv: f64,
    dominates_reference: bool,
    best_value: f64,
}

impl IndicatorState {
    pub fn new(n_obj: usize) -> Result<Self> {
        Self::with_tau_star(n_obj, DEFAULT_TAU_STAR)
    }

    pub fn with_tau_star(n_obj: usize, tau_star: f64) -> Result<Self> {
        if !(2..=3).contains(&n_obj) {
            return Err(Error::Unsupported(format!("indicator state for {n_obj} objectives")));
        }
        if !tau_star.is_finite() {
            return Err(Error::Config(format!("threshold {tau_star} is not finite")));
        }
        Ok(Self {
            n_obj,
            tau_star,
            count: 0,
            archive: Vec::new(),
            min_violation: f64::INFINITY,
            min_distance: f64::INFINITY,
            hv: 0.0,
            dominates_reference: false,
            best_value: f64::INFINITY,
        })
    }

    pub fn tau_star(&self) -> f64 {
        self.tau_star
    }

    /// Number of evaluations ingested so far.
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn nondominated_feasible(&self) -> &[Vec<f64>] {
        &self.archive
    }

    pub fn min_violation(&self) -> f64 {
        self.min_violation
    }

    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }

    pub fn hypervolume(&self) -> f64 {
        self.hv
    }

    pub fn has_feasible(&self) -> bool {
        self.min_distance.is_finite()
    }

    /// Current indicator value; `+inf` before the first evaluation.
    pub fn best_value(&self) -> f64 {
        self.best_value
    }

    /// The indicator with the distance and violation branches divided by the
    /// given scale factors. The hypervolume branch is never scaled.
    pub fn scaled_value(&self, d_scale: f64, v_scale: f64) -> f64 {
        if self.count == 0 {
            f64::INFINITY
        } else if self.has_feasible() {
            let quality = if self.dominates_reference {
                -self.hv
            } else {
                self.min_distance / d_scale
            };
            quality.min(self.tau_star)
        } else {
            self.min_violation / v_scale + self.tau_star
        }
    }

    /// Appends the next evaluation of the run. Returns whether the indicator
    /// value improved.
    pub fn ingest(&mut self, e: &Evaluation) -> Result<bool> {
        if e.eval_index != self.count + 1 {
            return Err(Error::Sequencing(format!(
                "expected evaluation {}, got {}",
                self.count + 1,
                e.eval_index
            )));
        }
        if e.f.len() != self.n_obj {
            return Err(Error::Domain(format!(
                "evaluation has {} objectives, state tracks {}",
                e.f.len(),
                self.n_obj
            )));
        }
        self.count += 1;
        self.min_violation = self.min_violation.min(e.v);
        if e.is_feasible() {
            self.min_distance = self.min_distance.min(point_distance_to_roi(&e.f));
            self.insert_feasible(&e.f)?;
        }
        let previous = self.best_value;
        self.best_value = self.scaled_value(1.0, 1.0);
        Ok(self.best_value < previous)
    }

    fn insert_feasible(&mut self, p: &[f64]) -> Result<()> {
        if self.n_obj == 2 {
            self.insert_2d(p);
        } else if !self.archive.iter().any(|q| weakly_dominates(q, p)) {
            self.archive.retain(|q| !weakly_dominates(p, q));
            self.archive.push(p.to_vec());
            if strictly_below_reference(p) {
                self.hv = hypervolume(&self.archive, 3)?;
            }
        }
        if strictly_below_reference(p) {
            self.dominates_reference = true;
        }
        Ok(())
    }

    /// Sorted-archive insertion; the hypervolume grows by exactly the area
    /// that `p` dominates and the archive did not.
    fn insert_2d(&mut self, p: &[f64]) {
        let idx = self.archive.partition_point(|q| q[0] < p[0]);
        if idx > 0 && self.archive[idx - 1][1] <= p[1] {
            return;
        }
        if idx < self.archive.len() && self.archive[idx][0] == p[0] && self.archive[idx][1] <= p[1] {
            return;
        }
        let mut end = idx;
        while end < self.archive.len() && self.archive[end][1] >= p[1] {
            end += 1;
        }

        if strictly_below_reference(p) {
            // the region above the predecessor's height is already covered
            let mut top = if idx > 0 {
                self.archive[idx - 1][1].min(1.0)
            } else {
                1.0
            };
            let mut x = p[0];
            let mut gain = 0.0;
            for q in &self.archive[idx..end] {
                let xq = q[0].min(1.0);
                if xq > x {
                    gain += (xq - x) * (top - p[1]).max(0.0);
                    x = xq;
                }
                top = top.min(q[1]);
            }
            let x_end = self.archive.get(end).map_or(1.0, |q| q[0].min(1.0));
            if x_end > x {
                gain += (x_end - x) * (top - p[1]).max(0.0);
            }
            self.hv += gain;
        }
        self.archive.splice(idx..end, std::iter::once(p.to_vec()));
    }
}

/// The constrained indicator of the evaluations ingested so far.
pub fn i_cmop(state: &IndicatorState) -> Result<f64> {
    if state.count() == 0 {
        return Err(Error::Precondition("indicator of an empty sequence".into()));
    }
    Ok(state.best_value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(i: u64, f: &[f64], v: f64) -> Evaluation {
        Evaluation {
            x: vec![],
            f_raw: f.to_vec(),
            f: f.to_vec(),
            g: vec![v],
            v,
            eval_index: i,
        }
    }

    #[test]
    fn infeasible_branch() {
        let mut s = IndicatorState::new(2).unwrap();
        assert!(i_cmop(&s).is_err());
        s.ingest(&eval(1, &[0.1, 0.1], 0.5)).unwrap();
        assert_eq!(i_cmop(&s).unwrap(), 1.5);
        s.ingest(&eval(2, &[0.1, 0.1], 0.2)).unwrap();
        assert_eq!(i_cmop(&s).unwrap(), 1.2);
        s.ingest(&eval(3, &[0.1, 0.1], 0.3)).unwrap();
        assert_eq!(i_cmop(&s).unwrap(), 1.2);
    }

    #[test]
    fn first_feasible_drops_below_threshold() {
        let mut s = IndicatorState::new(2).unwrap();
        s.ingest(&eval(1, &[0.0, 0.0], 0.3)).unwrap();
        assert_eq!(s.best_value(), 1.3);
        s.ingest(&eval(2, &[3.0, 4.0], 0.0)).unwrap();
        // distance 5 capped at the threshold
        assert_eq!(s.best_value(), 1.0);
        s.ingest(&eval(3, &[0.5, 0.5], 0.0)).unwrap();
        assert_eq!(s.best_value(), -0.25);
    }

    #[test]
    fn infeasible_points_are_ignored_once_feasible() {
        let mut s = IndicatorState::new(2).unwrap();
        s.ingest(&eval(1, &[0.8, 0.8], 0.0)).unwrap();
        let before = s.best_value();
        // better objectives but infeasible
        s.ingest(&eval(2, &[0.1, 0.1], 0.01)).unwrap();
        assert_eq!(s.best_value(), before);
        assert!((before + 0.04).abs() < 1e-15);
    }

    #[test]
    fn sequencing_is_enforced() {
        let mut s = IndicatorState::new(2).unwrap();
        assert!(matches!(
            s.ingest(&eval(2, &[0.5, 0.5], 0.0)),
            Err(Error::Sequencing(_))
        ));
        s.ingest(&eval(1, &[0.5, 0.5], 0.0)).unwrap();
        assert!(s.ingest(&eval(1, &[0.5, 0.5], 0.0)).is_err());
    }

    #[test]
    fn archive_stays_nondominated_without_duplicates() {
        let mut s = IndicatorState::new(2).unwrap();
        let pts = [
            [0.5, 0.5],
            [0.5, 0.5],
            [0.2, 0.9],
            [0.9, 0.2],
            [0.4, 0.4],
            [0.4, 0.6],
            [1.5, 0.0],
            [0.0, 1.5],
        ];
        for (i, p) in pts.iter().enumerate() {
            s.ingest(&eval(i as u64 + 1, p, 0.0)).unwrap();
        }
        let a = s.nondominated_feasible();
        for (i, p) in a.iter().enumerate() {
            for (j, q) in a.iter().enumerate() {
                if i != j {
                    assert!(!weakly_dominates(p, q), "{p:?} vs {q:?}");
                }
            }
        }
        assert_eq!(a.len(), 5);
        let expected = hypervolume(a, 2).unwrap();
        assert!((s.hypervolume() - expected).abs() < 1e-15);
    }

    #[test]
    fn three_objectives() {
        let mut s = IndicatorState::new(3).unwrap();
        s.ingest(&eval(1, &[1.2, 0.5, 0.5], 0.0)).unwrap();
        assert!((s.best_value() - 0.2).abs() < 1e-15);
        s.ingest(&eval(2, &[0.5, 0.5, 0.5], 0.0)).unwrap();
        assert_eq!(s.best_value(), -0.125);
    }

    #[test]
    fn scaled_value_branches() {
        let mut s = IndicatorState::new(2).unwrap();
        s.ingest(&eval(1, &[0.0, 0.0], 5.0)).unwrap();
        assert_eq!(s.scaled_value(1.0, 10.0), 1.5);
        s.ingest(&eval(2, &[4.0, 1.0], 0.0)).unwrap();
        assert!((s.scaled_value(10.0, 1.0) - 0.3).abs() < 1e-15);
        assert_eq!(s.scaled_value(1.0, 1.0), s.best_value());
    }
}
