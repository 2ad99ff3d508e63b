use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::compare::ScheduleParams;
use super::operators::{DeParams, MutationParams, SbxParams};
use crate::error::{Error, Result};
use crate::types::ProblemMeta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgorithmKind {
    /// Generational EA ranked by constrained domination.
    #[serde(rename = "CDP-EA")]
    CdpEa,
    /// Decomposition EA with an adaptive epsilon comparison level.
    #[serde(rename = "MOEAD-IEPS")]
    MoeadIeps,
    /// Convergence and diversity archives with restricted mating.
    #[serde(rename = "TWO-ARCH")]
    TwoArchive,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 3] = [
        AlgorithmKind::CdpEa,
        AlgorithmKind::MoeadIeps,
        AlgorithmKind::TwoArchive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::CdpEa => "CDP-EA",
            AlgorithmKind::MoeadIeps => "MOEAD-IEPS",
            AlgorithmKind::TwoArchive => "TWO-ARCH",
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MoeadParams {
    pub neighborhood: usize,
    pub mating_probability: f64,
    pub max_replacements: usize,
    pub tau_decay: f64,
    pub alpha: f64,
    /// Fraction of the generations after which the comparison level is zero.
    pub cutoff_fraction: f64,
    /// Fraction of the population whose violation rank sets the initial level.
    pub theta_fraction: f64,
}

impl Default for MoeadParams {
    fn default() -> Self {
        Self {
            neighborhood: 30,
            mating_probability: 0.9,
            max_replacements: 2,
            tau_decay: 0.1,
            alpha: 0.95,
            cutoff_fraction: 0.8,
            theta_fraction: 0.05,
        }
    }
}

/// Engine choice and parameters. Unset sizes follow the default budget rule:
/// `100 M` individuals for `120 D / M` generations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub kind: AlgorithmKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generations: Option<usize>,
    #[serde(default)]
    pub sbx: SbxParams,
    #[serde(default)]
    pub mutation: MutationParams,
    #[serde(default)]
    pub de: DeParams,
    #[serde(default)]
    pub moead: MoeadParams,
}

impl AlgorithmConfig {
    pub fn new(kind: AlgorithmKind) -> Self {
        Self {
            kind,
            population_size: None,
            generations: None,
            sbx: SbxParams::default(),
            mutation: MutationParams::default(),
            de: DeParams::default(),
            moead: MoeadParams::default(),
        }
    }

    pub fn population_size_for(&self, meta: &ProblemMeta) -> usize {
        self.population_size.unwrap_or(100 * meta.n_obj)
    }

    pub fn generations_for(&self, meta: &ProblemMeta) -> usize {
        self.generations.unwrap_or(120 * meta.dim / meta.n_obj)
    }

    pub fn budget_for(&self, meta: &ProblemMeta) -> u64 {
        (self.population_size_for(meta) * self.generations_for(meta)) as u64
    }

    pub fn schedule_params(&self, meta: &ProblemMeta) -> ScheduleParams {
        let n_g = self.generations_for(meta);
        let n_p = self.population_size_for(meta);
        ScheduleParams {
            tau_decay: self.moead.tau_decay,
            alpha: self.moead.alpha,
            t_c: (self.moead.cutoff_fraction * n_g as f64).floor() as usize,
            theta: ((self.moead.theta_fraction * n_p as f64).ceil() as usize).max(1),
        }
    }

    pub fn validate(&self, meta: &ProblemMeta) -> Result<()> {
        let n_p = self.population_size_for(meta);
        let bad = |what: &str| Err(Error::Config(format!("{}: {what}", self.kind)));
        if n_p < 4 {
            return bad("population size must be at least 4");
        }
        if self.generations_for(meta) < 1 {
            return bad("at least one generation is required");
        }
        let p = &self.moead;
        if p.neighborhood < 3 || p.max_replacements == 0 {
            return bad("neighborhood must hold at least 3 and replacements be positive");
        }
        let probabilities = [
            self.sbx.probability,
            self.mutation.probability_for(meta.dim),
            self.de.cr,
            p.mating_probability,
            p.alpha,
            p.cutoff_fraction,
            p.theta_fraction,
        ];
        if probabilities.iter().any(|q| !(0.0..=1.0).contains(q)) {
            return bad("probabilities and fractions must lie in [0, 1]");
        }
        if !(self.sbx.eta > 0.0 && self.mutation.eta() > 0.0 && p.tau_decay > 0.0 && p.tau_decay < 1.0) {
            return bad("distribution indices must be positive and the decay in (0, 1)");
        }
        Ok(())
    }
}
