//! Pairwise comparators used by the engines and the adaptive comparison
//! level of the epsilon relation.

use crate::pareto::dominates;
use crate::types::Evaluation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ABetter,
    BBetter,
    /// Neither is preferred.
    Tie,
}

impl Verdict {
    pub fn flipped(self) -> Self {
        match self {
            Verdict::ABetter => Verdict::BBetter,
            Verdict::BBetter => Verdict::ABetter,
            Verdict::Tie => Verdict::Tie,
        }
    }
}

/// Constrained domination: Pareto dominance on normalized objectives when
/// both are feasible, otherwise the smaller overall violation.
pub fn cdp_compare(a: &Evaluation, b: &Evaluation) -> Verdict {
    if a.v == 0.0 && b.v == 0.0 {
        if dominates(&a.f, &b.f) {
            Verdict::ABetter
        } else if dominates(&b.f, &a.f) {
            Verdict::BBetter
        } else {
            Verdict::Tie
        }
    } else if a.v < b.v {
        Verdict::ABetter
    } else if b.v < a.v {
        Verdict::BBetter
    } else {
        Verdict::Tie
    }
}

/// `max_m w_m |f_m - z_m|`.
pub fn tchebycheff(f: &[f64], weight: &[f64], z_star: &[f64]) -> f64 {
    f.iter()
        .zip(weight)
        .zip(z_star)
        .map(|((f, w), z)| w * (f - z).abs())
        .fold(0.0, f64::max)
}

/// Epsilon-level comparison: aggregated values decide when both violations
/// are within `eps` or equal, the smaller violation otherwise.
pub fn eps_compare(v_a: f64, v_b: f64, g_a: f64, g_b: f64, eps: f64) -> Verdict {
    let by_value = |x: f64, y: f64| {
        if x < y {
            Verdict::ABetter
        } else if y < x {
            Verdict::BBetter
        } else {
            Verdict::Tie
        }
    };
    if (v_a <= eps && v_b <= eps) || v_a == v_b {
        by_value(g_a, g_b)
    } else {
        by_value(v_a, v_b)
    }
}

/// Parameters of the comparison-level schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleParams {
    pub tau_decay: f64,
    pub alpha: f64,
    /// First generation at which the level is pinned to zero.
    pub t_c: usize,
    /// 1-based rank of the initial violation used as the starting level.
    pub theta: usize,
}

/// Comparison level updated once per generation from the feasibility ratio
/// of the current population.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSchedule {
    params: ScheduleParams,
    epsilon: f64,
    v_max: f64,
    t: usize,
}

impl EpsilonSchedule {
    pub fn new(params: ScheduleParams) -> Self {
        Self {
            params,
            epsilon: 0.0,
            v_max: 0.0,
            t: 0,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    /// Generation the next update applies to.
    pub fn generation(&self) -> usize {
        self.t
    }

    pub fn params(&self) -> &ScheduleParams {
        &self.params
    }

    /// Records an observed violation.
    pub fn observe(&mut self, v: f64) {
        self.v_max = self.v_max.max(v);
    }

    /// Sets the level of generation `t` and advances `t`. At `t = 0` the level
    /// is the `theta`-th smallest of `violations`.
    pub fn update(&mut self, feasible_ratio: f64, violations: &[f64]) -> f64 {
        for v in violations {
            self.observe(*v);
        }
        let p = self.params;
        self.epsilon = if self.t == 0 {
            let mut sorted = violations.to_vec();
            sorted.sort_by(f64::total_cmp);
            sorted
                .get(p.theta.clamp(1, sorted.len().max(1)) - 1)
                .copied()
                .unwrap_or(0.0)
        } else if self.t >= p.t_c {
            0.0
        } else if feasible_ratio < p.alpha {
            (1.0 - p.tau_decay) * self.epsilon
        } else {
            (1.0 + p.tau_decay) * self.v_max
        };
        self.t += 1;
        self.epsilon
    }
}
