//! Executes every (problem, dimension, algorithm, run) cell of a
//! configuration and records the results in a [`Store`].

use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use cmop_core::evolve::{run_algorithm, AlgorithmConfig};
use cmop_core::runtimes::{extract_runtimes, write_steps_csv, StepRecorder};
use cmop_core::targets::{compute_scales, make_targets};
use cmop_core::trace::TraceWriter;
use cmop_core::types::trace_file_name;
use cmop_core::{derive_seed, Error, IndicatorState, ProblemDefinition, Registry, Result, RngStream, TargetSet};
use log::{info, warn};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::store::{
    cell_key, instance_key, remove_if_present, write_atomic, CellRecord, CellStatus, InstanceRecord, Manifest, Store,
};

/// Algorithm label reserved for seeding the scale sample of an instance.
const SCALES_SEED_KEY: &str = "__scales__";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub force: bool,
    /// Parallel workers; `None` uses one per core.
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub executed: usize,
    pub skipped: usize,
    pub failed: usize,
}

struct Instance {
    key: String,
    definition: ProblemDefinition,
    targets: TargetSet,
    record: InstanceRecord,
}

struct Job<'a> {
    key: String,
    instance: &'a Instance,
    label: String,
    config: AlgorithmConfig,
    run: u32,
    seed: u64,
}

fn prepare_instance(registry: &Registry, config: &ExperimentConfig, problem: &str, dim: usize) -> Result<Instance> {
    let definition = registry.get(problem, dim)?;
    let key = instance_key(problem, dim);
    let targets = make_targets(definition.meta())?;
    let seed = derive_seed(config.master_seed, &key, SCALES_SEED_KEY, 0);
    let scales = compute_scales(&definition, &mut RngStream::new(seed))?;
    let record = InstanceRecord {
        problem: problem.to_string(),
        dim,
        hv_ref: -targets.tau_ref,
        tau_ref: targets.tau_ref,
        scales,
        targets_file: format!("targets/D{dim}/{problem}.csv"),
    };
    Ok(Instance {
        key,
        definition,
        targets,
        record,
    })
}

fn cell_files(job: &Job, store_traces: bool) -> (Option<String>, String, String) {
    let dim = job.instance.record.dim;
    let name = trace_file_name(&job.instance.record.problem, &job.label, job.run);
    (
        store_traces.then(|| format!("traces/D{dim}/{name}")),
        format!("steps/D{dim}/{name}"),
        format!("runtimes/D{dim}/{name}"),
    )
}

fn execute(root: &Path, job: &Job, store_traces: bool) -> Result<CellRecord> {
    let inst = job.instance;
    let meta = inst.definition.meta();
    let budget = job.config.budget_for(meta);
    let (trace_rel, steps_rel, runtimes_rel) = cell_files(job, store_traces);
    let mut recorder = StepRecorder::new(IndicatorState::new(meta.n_obj)?, inst.record.scales);

    let diagnostics = if let Some(rel) = &trace_rel {
        let path = root.join(rel);
        std::fs::create_dir_all(path.parent().expect("relative file has a parent"))?;
        let tmp = path.with_extension("tmp");
        let writer = TraceWriter::new(meta, BufWriter::new(File::create(&tmp)?))?;
        let mut sink = (&mut recorder, writer);
        let d = run_algorithm(&inst.definition, &job.config, job.seed, &mut sink)
            .and_then(|d| sink.1.finish().map(|_| d))
            .inspect_err(|_| {
                let _ = std::fs::remove_file(&tmp);
            })?;
        std::fs::rename(&tmp, &path)?;
        d
    } else {
        run_algorithm(&inst.definition, &job.config, job.seed, &mut recorder)?
    };

    let mut buf = Vec::new();
    write_steps_csv(recorder.steps(), &mut buf)?;
    write_atomic(&root.join(&steps_rel), &buf)?;

    let id = cmop_core::RunId {
        problem: inst.record.problem.clone(),
        algorithm: job.label.clone(),
        run_index: job.run,
    };
    let runtimes = extract_runtimes(id, recorder.steps(), &inst.targets, budget)?;
    let mut buf = Vec::new();
    runtimes.write_csv(&mut buf)?;
    write_atomic(&root.join(&runtimes_rel), &buf)?;

    let mut files: Vec<String> = trace_rel.into_iter().collect();
    files.push(steps_rel);
    files.push(runtimes_rel);
    Ok(CellRecord {
        problem: inst.record.problem.clone(),
        dim: inst.record.dim,
        algorithm: job.label.clone(),
        run_index: job.run,
        seed: job.seed,
        budget,
        status: CellStatus::Complete,
        message: None,
        evaluations: diagnostics.evaluations,
        initial_feasible: diagnostics.initial_feasible,
        final_value: Some(recorder.current()),
        files,
    })
}

fn is_done(root: &Path, previous: Option<&Manifest>, job: &Job, budget: u64) -> Option<CellRecord> {
    let old = previous?.cells.get(&job.key)?;
    let fresh = old.status == CellStatus::Complete
        && old.seed == job.seed
        && old.budget == budget
        && old.files.iter().all(|f| root.join(f).is_file());
    fresh.then(|| old.clone())
}

/// Runs all cells of `config` into `config.output`; returns the store and a
/// summary. Failed cells are recorded in the manifest, not raised.
pub fn run_experiment(
    config: &ExperimentConfig,
    registry: &Registry,
    options: &RunOptions,
) -> Result<(Store, RunSummary)> {
    config.validate(registry)?;
    let root: PathBuf = config.output.clone();
    std::fs::create_dir_all(&root)?;
    let previous = Store::open(&root).ok().map(|s| s.manifest);

    let mut instances = Vec::new();
    for problem in &config.problems {
        for dim in &config.dimensions {
            instances.push(prepare_instance(registry, config, problem, *dim)?);
        }
    }
    let entries = config.entries();
    let mut jobs = Vec::new();
    for inst in &instances {
        for e in &entries {
            let label = e.label();
            for run in 0..config.runs {
                jobs.push(Job {
                    key: cell_key(&inst.record.problem, inst.record.dim, &label, run),
                    instance: inst,
                    label: label.clone(),
                    config: e.algorithm.clone(),
                    run,
                    seed: derive_seed(config.master_seed, &inst.key, &e.seed_key(), run),
                });
            }
        }
    }

    let mut manifest = Manifest::new(config.clone());
    for inst in &instances {
        let path = root.join(&inst.record.targets_file);
        let unchanged = previous
            .as_ref()
            .and_then(|m| m.instances.get(&inst.key))
            .is_some_and(|old| old == &inst.record)
            && path.is_file();
        if !unchanged || options.force {
            let mut buf = Vec::new();
            inst.targets.write_csv(&mut buf)?;
            write_atomic(&path, &buf)?;
        }
        manifest.instances.insert(inst.key.clone(), inst.record.clone());
    }

    let (done, todo): (Vec<_>, Vec<_>) = jobs.iter().partition(|j| {
        !options.force
            && is_done(
                &root,
                previous.as_ref(),
                j,
                j.config.budget_for(j.instance.definition.meta()),
            )
            .is_some()
    });
    for j in &done {
        let budget = j.config.budget_for(j.instance.definition.meta());
        let rec = is_done(&root, previous.as_ref(), j, budget).expect("partitioned as done");
        manifest.cells.insert(j.key.clone(), rec);
    }
    info!("{} cells to run, {} already complete", todo.len(), done.len());

    let store_traces = config.store_traces;
    let execute_all = || -> Vec<(String, CellRecord)> {
        todo.par_iter()
            .map(|j| {
                let rec = execute(&root, j, store_traces).unwrap_or_else(|e| {
                    warn!("cell {} failed: {e}", j.key);
                    CellRecord {
                        problem: j.instance.record.problem.clone(),
                        dim: j.instance.record.dim,
                        algorithm: j.label.clone(),
                        run_index: j.run,
                        seed: j.seed,
                        budget: j.config.budget_for(j.instance.definition.meta()),
                        status: CellStatus::Failed,
                        message: Some(e.to_string()),
                        evaluations: 0,
                        initial_feasible: 0,
                        final_value: None,
                        files: Vec::new(),
                    }
                });
                (j.key.clone(), rec)
            })
            .collect()
    };
    let results = match options.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?
            .install(execute_all),
        None => execute_all(),
    };
    let summary = RunSummary {
        executed: results.len(),
        skipped: done.len(),
        failed: results.iter().filter(|(_, r)| r.status == CellStatus::Failed).count(),
    };
    manifest.cells.extend(results);

    if let Some(old) = &previous {
        if summary.executed == 0 {
            manifest.reports = old.reports.clone();
        }
        // files that belonged to cells or reports no longer in the store
        let keep = manifest.files();
        for f in old.files().difference(&keep) {
            remove_if_present(&root.join(f))?;
        }
    }
    let store = Store { root, manifest };
    store.save()?;
    Ok((store, summary))
}

/// Names of the problems in a suite that have results for `dim`.
pub fn suite_members(store: &Store, suite: &[String], dim: usize) -> Vec<String> {
    let present: BTreeSet<&str> = store
        .manifest
        .instances
        .values()
        .filter(|i| i.dim == dim)
        .map(|i| i.problem.as_str())
        .collect();
    suite.iter().filter(|p| present.contains(p.as_str())).cloned().collect()
}
