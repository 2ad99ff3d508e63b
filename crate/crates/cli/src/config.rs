//! Experiment configuration, read from a single JSON document.
//!
//! ```json
//! {
//!   "problems": ["LIN-TRUNC", "HOLE"],
//!   "dimensions": [5, 10],
//!   "algorithms": ["CDP-EA", {"label": "eps", "algorithm": {"kind": "MOEAD-IEPS"}}],
//!   "runs": 10,
//!   "master_seed": 1,
//!   "suites": {"easy": ["LIN-TRUNC"]}
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use cmop_core::evolve::{AlgorithmConfig, AlgorithmKind};
use cmop_core::{Error, Registry, Result};
use serde::{Deserialize, Serialize};

/// Name of the suite that always holds every configured problem.
pub const ALL_SUITE: &str = "all";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmEntry {
    /// Name used in file names and reports; defaults to the engine name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Entries sharing a seed group draw identical seeds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_group: Option<String>,
    pub algorithm: AlgorithmConfig,
}

impl AlgorithmEntry {
    pub fn new(kind: AlgorithmKind) -> Self {
        Self {
            label: None,
            seed_group: None,
            algorithm: AlgorithmConfig::new(kind),
        }
    }

    pub fn label(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| self.algorithm.kind.name().to_string())
    }

    pub fn seed_key(&self) -> String {
        self.seed_group.clone().unwrap_or_else(|| self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum AlgorithmSpec {
    Kind(AlgorithmKind),
    Entry(AlgorithmEntry),
}

impl AlgorithmSpec {
    pub fn entry(&self) -> AlgorithmEntry {
        match self {
            AlgorithmSpec::Kind(k) => AlgorithmEntry::new(*k),
            AlgorithmSpec::Entry(e) => e.clone(),
        }
    }
}

fn default_dimensions() -> Vec<usize> {
    vec![5, 10, 30]
}

fn default_algorithms() -> Vec<AlgorithmSpec> {
    AlgorithmKind::ALL.into_iter().map(AlgorithmSpec::Kind).collect()
}

fn default_runs() -> u32 {
    30
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problems: Vec<String>,
    #[serde(default = "default_dimensions")]
    pub dimensions: Vec<usize>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<AlgorithmSpec>,
    #[serde(default = "default_runs")]
    pub runs: u32,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    /// Whether full evaluation traces are written next to the step traces.
    #[serde(default = "yes")]
    pub store_traces: bool,
    /// Named problem groups for pooled reports.
    #[serde(default)]
    pub suites: BTreeMap<String, Vec<String>>,
}

impl ExperimentConfig {
    pub fn new(problems: &[&str], dimensions: &[usize], runs: u32) -> Self {
        Self {
            problems: problems.iter().map(|p| p.to_string()).collect(),
            dimensions: dimensions.to_vec(),
            algorithms: default_algorithms(),
            runs,
            master_seed: 0,
            output: default_output(),
            store_traces: true,
            suites: BTreeMap::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn entries(&self) -> Vec<AlgorithmEntry> {
        self.algorithms.iter().map(AlgorithmSpec::entry).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.entries().iter().map(AlgorithmEntry::label).collect()
    }

    /// Configured suites plus [`ALL_SUITE`].
    pub fn suites(&self) -> BTreeMap<String, Vec<String>> {
        let mut s = self.suites.clone();
        s.insert(ALL_SUITE.to_string(), self.problems.clone());
        s
    }

    /// Checks everything that can fail before any run starts.
    pub fn validate(&self, registry: &Registry) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.problems.is_empty() || self.dimensions.is_empty() || self.algorithms.is_empty() {
            return fail("problems, dimensions and algorithms must be nonempty".into());
        }
        if self.runs == 0 {
            return fail("runs must be positive".into());
        }
        for list in [&self.problems, &self.labels()] {
            let unique: BTreeSet<&String> = list.iter().collect();
            if unique.len() != list.len() {
                return fail(format!("duplicate name in {list:?}"));
            }
        }
        for name in self.problems.iter().chain(&self.labels()) {
            if name.is_empty()
                || name.contains("__")
                || !name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
            {
                return fail(format!("`{name}` is not usable in file names"));
            }
        }
        for (suite, members) in &self.suites {
            if suite == ALL_SUITE {
                return fail(format!("suite name `{ALL_SUITE}` is reserved"));
            }
            if let Some(p) = members.iter().find(|p| !self.problems.contains(p)) {
                return fail(format!("suite `{suite}` lists `{p}`, which is not configured"));
            }
        }
        for p in &self.problems {
            if !registry.contains(p) {
                return fail(format!("unknown problem `{p}`"));
            }
            for d in &self.dimensions {
                let def = registry.get(p, *d)?;
                for e in self.entries() {
                    e.algorithm.validate(def.meta())?;
                }
            }
        }
        Ok(())
    }
}
