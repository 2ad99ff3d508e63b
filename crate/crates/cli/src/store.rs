//! On-disk result store: a manifest plus per-cell CSV files.
//!
//! ```text
//! <out>/manifest.json
//! <out>/targets/D<d>/<problem>.csv
//! <out>/traces/D<d>/<problem>__<alg>__run<k>.csv     (optional)
//! <out>/steps/D<d>/<problem>__<alg>__run<k>.csv
//! <out>/runtimes/D<d>/<problem>__<alg>__run<k>.csv
//! <out>/reports/...
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use cmop_core::runtimes::read_steps_csv;
use cmop_core::targets::ScaleFactors;
use cmop_core::{Error, Result, RunId, RuntimeRecord, StepPoint};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const MANIFEST: &str = "manifest.json";

pub fn instance_key(problem: &str, dim: usize) -> String {
    format!("{problem}/D{dim}")
}

pub fn cell_key(problem: &str, dim: usize, algorithm: &str, run: u32) -> String {
    format!("{problem}/D{dim}/{algorithm}/run{run}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub problem: String,
    pub dim: usize,
    pub hv_ref: f64,
    pub tau_ref: f64,
    pub scales: ScaleFactors,
    pub targets_file: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Complete,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub problem: String,
    pub dim: usize,
    pub algorithm: String,
    pub run_index: u32,
    pub seed: u64,
    pub budget: u64,
    pub status: CellStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub evaluations: u64,
    pub initial_feasible: usize,
    /// Scaled indicator after the last evaluation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_value: Option<f64>,
    pub files: Vec<String>,
}

impl CellRecord {
    pub fn id(&self) -> RunId {
        RunId {
            problem: self.problem.clone(),
            algorithm: self.algorithm.clone(),
            run_index: self.run_index,
        }
    }

    fn file(&self, dir: &str) -> Option<&str> {
        self.files
            .iter()
            .map(String::as_str)
            .find(|f| f.starts_with(&format!("{dir}/")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub software: String,
    pub config: ExperimentConfig,
    pub instances: BTreeMap<String, InstanceRecord>,
    pub cells: BTreeMap<String, CellRecord>,
    pub reports: BTreeSet<String>,
}

impl Manifest {
    pub fn new(config: ExperimentConfig) -> Self {
        Self {
            software: format!("cmop {}", env!("CARGO_PKG_VERSION")),
            config,
            instances: BTreeMap::new(),
            cells: BTreeMap::new(),
            reports: BTreeSet::new(),
        }
    }

    /// Every file the manifest refers to, relative to the store root.
    pub fn files(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.instances.values().map(|i| i.targets_file.clone()).collect();
        for c in self.cells.values() {
            out.extend(c.files.iter().cloned());
        }
        out.extend(self.reports.iter().cloned());
        out
    }

    pub fn incomplete(&self) -> Vec<&str> {
        self.cells
            .iter()
            .filter(|(_, c)| c.status != CellStatus::Complete)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

/// Writes through a temporary sibling so readers never see partial files.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// An opened result store.
#[derive(Debug, Clone)]
pub struct Store {
    pub root: PathBuf,
    pub manifest: Manifest,
}

impl Store {
    pub fn open(root: &Path) -> Result<Self> {
        let path = root.join(MANIFEST);
        let text = fs::read_to_string(&path)
            .map_err(|e| Error::Config(format!("no result store at {}: {e}", root.display())))?;
        let manifest = serde_json::from_str(&text).map_err(|e| Error::Format {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Ok(Self {
            root: root.to_path_buf(),
            manifest,
        })
    }

    pub fn save(&self) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&self.manifest).map_err(|e| Error::Config(e.to_string()))?;
        text.push('\n');
        write_atomic(&self.root.join(MANIFEST), text.as_bytes())
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    /// Completed cells of one (problem, dimension, algorithm), by run index.
    pub fn cells(&self, problem: &str, dim: usize, algorithm: &str) -> Vec<&CellRecord> {
        let mut v: Vec<&CellRecord> = self
            .manifest
            .cells
            .values()
            .filter(|c| {
                c.problem == problem && c.dim == dim && c.algorithm == algorithm && c.status == CellStatus::Complete
            })
            .collect();
        v.sort_by_key(|c| c.run_index);
        v
    }

    pub fn runtime_records(&self, problem: &str, dim: usize, algorithm: &str) -> Result<Vec<RuntimeRecord>> {
        self.cells(problem, dim, algorithm)
            .into_iter()
            .map(|c| {
                let rel = c
                    .file("runtimes")
                    .ok_or_else(|| Error::Aggregation(format!("cell {:?} has no runtimes", c.id())))?;
                let file = fs::File::open(self.path(rel))?;
                RuntimeRecord::read_csv(file, c.id(), c.budget, rel)
            })
            .collect()
    }

    pub fn step_traces(&self, problem: &str, dim: usize, algorithm: &str) -> Result<Vec<Vec<StepPoint>>> {
        self.cells(problem, dim, algorithm)
            .into_iter()
            .map(|c| {
                let rel = c
                    .file("steps")
                    .ok_or_else(|| Error::Aggregation(format!("cell {:?} has no step trace", c.id())))?;
                read_steps_csv(fs::File::open(self.path(rel))?, rel)
            })
            .collect()
    }

    /// Deletes the current report files and records `files` instead.
    pub fn replace_reports(&mut self, prefix: &str, files: BTreeSet<String>) -> Result<()> {
        let stale: Vec<String> = self
            .manifest
            .reports
            .iter()
            .filter(|r| r.starts_with(prefix) && !files.contains(*r))
            .cloned()
            .collect();
        for r in stale {
            remove_if_present(&self.path(&r))?;
            self.manifest.reports.remove(&r);
        }
        self.manifest.reports.extend(files);
        self.save()
    }
}

pub fn remove_if_present(path: &Path) -> Result<()> {
    match fs::remove_file(path) {
        Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(e.into()),
        _ => Ok(()),
    }
}

/// Relative paths of all regular files under `root` except the manifest.
pub fn files_on_disk(root: &Path) -> Result<BTreeSet<String>> {
    fn walk(dir: &Path, root: &Path, out: &mut BTreeSet<String>) -> Result<()> {
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            if path.is_dir() {
                walk(&path, root, out)?;
            } else {
                let rel = path
                    .strip_prefix(root)
                    .expect("walk stays under root")
                    .to_string_lossy()
                    .replace('\\', "/");
                if rel != MANIFEST {
                    out.insert(rel);
                }
            }
        }
        Ok(())
    }
    let mut out = BTreeSet::new();
    walk(root, root, &mut out)?;
    Ok(out)
}
