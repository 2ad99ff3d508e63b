//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use cmop_cli::config::{AlgorithmSpec, ExperimentConfig};
use cmop_cli::store::files_on_disk;
use cmop_cli::{emit_delta_report, emit_erd_report, run_experiment, Grouping, RunOptions};
use cmop_core::delta::delta_pair;
use cmop_core::evolve::{
    cdp_compare, eps_compare, nondominated_sort, run_algorithm, AlgorithmConfig, AlgorithmKind, EpsilonSchedule,
    Verdict,
};
use cmop_core::indicators::{hypervolume, i_cmop};
use cmop_core::oracle::monte_carlo_hypervolume;
use cmop_core::problems::{builtin, BUILTIN_NAMES, DELAYED_FEAS, HOLE, LIN_TRUNC};
use cmop_core::runtimes::extract_runtimes;
use cmop_core::targets::TargetClass;
use cmop_core::{
    make_targets, Diagnostics, Evaluation, IndicatorState, Registry, RngStream, RunId, RuntimeRecord, StepPoint,
};
use oracles::{batch_i_cmop, brute_force_fronts, close, direct_single_run_delta};

/// Outcome of one criterion: pass flag and a one-line summary.
type Outcome = (bool, String);

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn eval(f: Vec<f64>, v: f64, index: u64) -> Evaluation {
    Evaluation {
        x: vec![],
        f_raw: f.clone(),
        f,
        g: vec![v],
        v,
        eval_index: index,
    }
}

fn random_point(rng: &mut RngStream, m: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..m).map(|_| rng.uniform_in(lo, hi)).collect()
}

fn criterion_1() -> Outcome {
    let mut rng = RngStream::new(101);
    let mut separated = 0;
    for case in 0..1000u64 {
        let m = 2 + (case % 2) as usize;
        let n = 1 + rng.index(30);
        let mut infeasible_only = IndicatorState::new(m).unwrap();
        let mut with_feasible = IndicatorState::new(m).unwrap();
        let feasible_at = rng.index(n);
        for k in 0..n {
            let f = random_point(&mut rng, m, -0.3, 1.5);
            let v = rng.uniform_in(1e-12, 5.0);
            let index = k as u64 + 1;
            infeasible_only.ingest(&eval(f.clone(), v, index)).unwrap();
            let v_mixed = if k == feasible_at || rng.chance(0.3) { 0.0 } else { v };
            with_feasible.ingest(&eval(f, v_mixed, index)).unwrap();
        }
        let a = i_cmop(&with_feasible).unwrap();
        let b = i_cmop(&infeasible_only).unwrap();
        if a <= 1.0 && 1.0 < b {
            separated += 1;
        }
    }
    (separated == 1000, format!("{separated}/1000 pairs separated"))
}

fn criterion_2() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut rng = RngStream::new(202);
    for (name, analytic) in [(LIN_TRUNC, 0.5), (DELAYED_FEAS, 0.5), (HOLE, 0.46)] {
        let p = builtin(name, 5).unwrap();
        let m = p.meta().n_obj;
        let front = p.front_sample(10_000).unwrap();
        let exact = hypervolume(&front, m).unwrap();
        let mc = monte_carlo_hypervolume(&front, m, 1_000_000, &mut rng).unwrap();
        let pass = (exact - analytic).abs() <= 1e-3 && mc.agrees(analytic, 3.0);
        ok &= pass;
        notes.push(format!(
            "{name} exact {exact:.5} mc {:.5}±{:.5}",
            mc.value, mc.std_error
        ));
    }
    let mut agree = 0;
    for k in 0..100 {
        let m = if k < 50 { 2 } else { 3 };
        let n = 1 + rng.index(20);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| random_point(&mut rng, m, 0.0, 1.0)).collect();
        let exact = hypervolume(&pts, m).unwrap();
        let mc = monte_carlo_hypervolume(&pts, m, 1_000_000, &mut rng).unwrap();
        if mc.agrees(exact, 3.0) {
            agree += 1;
        }
    }
    ok &= agree == 100;
    notes.push(format!("random sets within 3 SE: {agree}/100"));
    (ok, notes.join("; "))
}

fn criterion_3() -> Outcome {
    let mut rng = RngStream::new(303);
    let mut worst = 0.0f64;
    let mut ok = true;
    for stream in 0..100 {
        let m = 2 + stream % 2;
        let evals: Vec<Evaluation> = (0..500)
            .map(|k| {
                let v = if rng.chance(0.5) { 0.0 } else { rng.uniform_in(0.0, 4.0) };
                eval(random_point(&mut rng, m, -0.2, 1.4), v, k as u64 + 1)
            })
            .collect();
        let mut state = IndicatorState::new(m).unwrap();
        let mut last = f64::INFINITY;
        for (k, e) in evals.iter().enumerate() {
            state.ingest(e).unwrap();
            let now = state.best_value();
            let batch = batch_i_cmop(&evals[..=k], m);
            ok &= now <= last && close(now, batch, 1e-12);
            if now != batch {
                worst = worst.max((now - batch).abs() / now.abs().max(batch.abs()));
            }
            last = now;
        }
    }
    (ok, format!("100 streams of 500, max relative deviation {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    for name in BUILTIN_NAMES {
        let t = make_targets(builtin(name, 5).unwrap().meta()).unwrap();
        let values = t.values();
        ok &= t.len() == 102
            && t.count(TargetClass::Plus) == 51
            && t.count(TargetClass::Minus) == 51
            && values.iter().copied().fold(f64::NEG_INFINITY, f64::max) == t.tau_ref + 2.0
            && values.iter().copied().fold(f64::INFINITY, f64::min) == t.tau_ref + 1e-5;
    }
    (
        ok,
        format!("{} problems: 102 targets, 51/51, extremes exact", BUILTIN_NAMES.len()),
    )
}

/// Random nonincreasing step trace within `budget`.
fn random_steps(rng: &mut RngStream, budget: u64) -> Vec<StepPoint> {
    let n = rng.index(30);
    let mut idx: Vec<u64> = (0..n).map(|_| 1 + rng.index(budget as usize) as u64).collect();
    idx.sort_unstable();
    idx.dedup();
    let mut vals: Vec<f64> = idx.iter().map(|_| rng.uniform_in(-0.47, 2.2)).collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    idx.into_iter()
        .zip(vals)
        .map(|(eval_index, value)| StepPoint { eval_index, value })
        .collect()
}

fn run_id(alg: &str, run: u32) -> RunId {
    RunId {
        problem: HOLE.into(),
        algorithm: alg.into(),
        run_index: run,
    }
}

fn criterion_5() -> Outcome {
    let targets = make_targets(builtin(HOLE, 5).unwrap().meta()).unwrap();
    let classes = targets.classes();
    let mut rng = RngStream::new(505);
    let mut violations = BTreeMap::<&str, usize>::new();
    let mut flag = |name: &'static str, ok: bool| {
        if !ok {
            *violations.entry(name).or_default() += 1;
        }
    };
    let records = |rng: &mut RngStream, alg: &str, runs: usize, budget: u64| -> Vec<RuntimeRecord> {
        (0..runs)
            .map(|k| extract_runtimes(run_id(alg, k as u32), &random_steps(rng, budget), &targets, budget).unwrap())
            .collect()
    };
    for _ in 0..10_000 {
        let budget = 2 + rng.index(100_000) as u64;
        let runs = 1 + rng.index(4);
        let a = records(&mut rng, "a", runs, budget);
        let b = records(&mut rng, "b", runs, budget);
        let ab = delta_pair(&a, &b, &targets, budget).unwrap();
        let ba = delta_pair(&b, &a, &targets, budget).unwrap();
        let aa = delta_pair(&a, &a, &targets, budget).unwrap();
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        flag("range", unit(ab.delta) && unit(ab.delta_plus) && unit(ab.delta_minus));
        flag("symmetry", (ab.delta - ba.delta).abs() <= 1e-12);
        let n = ab.n as f64;
        let recomposed = (ab.n_minus as f64 * ab.delta_minus + ab.n_plus as f64 * ab.delta_plus) / n;
        flag("decomposition", (ab.delta - recomposed).abs() <= 1e-12);
        flag("self", aa.delta == 0.0);
    }

    let budget = 60_000;
    let all_at_one = RuntimeRecord {
        id: run_id("a", 0),
        budget,
        runtimes: vec![Some(1); targets.len()],
    };
    let none = RuntimeRecord {
        id: run_id("b", 0),
        budget,
        runtimes: vec![None; targets.len()],
    };
    let extreme = delta_pair(std::slice::from_ref(&all_at_one), &[none], &targets, budget).unwrap();
    flag(
        "extreme one",
        extreme.delta == 1.0 && extreme.delta_plus == 1.0 && extreme.delta_minus == 1.0,
    );
    let mut same = all_at_one.clone();
    same.id = run_id("b", 0);
    flag(
        "extreme zero",
        delta_pair(&[all_at_one], &[same], &targets, budget).unwrap().delta == 0.0,
    );

    for _ in 0..1000 {
        let budget = 2 + rng.index(100_000) as u64;
        let a = records(&mut rng, "a", 1, budget);
        let b = records(&mut rng, "b", 1, budget);
        let got = delta_pair(&a, &b, &targets, budget).unwrap();
        let (d, dp, dm) = direct_single_run_delta(&a[0].runtimes, &b[0].runtimes, &classes, budget);
        flag(
            "direct single run",
            close(got.delta, d, 1e-12) && close(got.delta_plus, dp, 1e-12) && close(got.delta_minus, dm, 1e-12),
        );
    }
    if violations.is_empty() {
        (
            true,
            "10^4 random pairs and 10^3 single-run oracle checks, extremes exact".into(),
        )
    } else {
        (false, format!("violations: {violations:?}"))
    }
}

fn criterion_6() -> Outcome {
    let meta = builtin(DELAYED_FEAS, 10).unwrap().meta().clone();
    let config = AlgorithmConfig::new(AlgorithmKind::MoeadIeps);
    let n_p = config.population_size_for(&meta);
    let n_g = config.generations_for(&meta);
    let params = config.schedule_params(&meta);
    let mut ok = params.tau_decay == 0.1 && params.alpha == 0.95;
    let theta = (5 * n_p).div_ceil(100);

    // initial level: theta-th smallest violation of the initial population
    let mut rng = RngStream::new(606);
    let initial: Vec<f64> = (0..n_p).map(|_| rng.uniform_in(0.0, 10.0)).collect();
    let mut sorted = initial.clone();
    sorted.sort_by(f64::total_cmp);
    let mut s = EpsilonSchedule::new(params);
    let e0 = s.update(0.0, &initial);
    ok &= e0 == sorted[theta - 1];

    // shrinking branch while the population is mostly infeasible, then the
    // growing branch once the feasible ratio reaches alpha
    let v_max = sorted[n_p - 1];
    let mut expected = e0;
    let mut trajectory = vec![e0];
    for t in 1..n_g {
        let ratio = if t % 7 == 0 { 0.95 } else { 0.5 };
        let got = s.update(ratio, &[]);
        expected = if 10 * t >= 8 * n_g {
            0.0
        } else if ratio >= 0.95 {
            1.1 * v_max
        } else {
            0.9 * expected
        };
        ok &= close(got, expected, 1e-12);
        trajectory.push(got);
    }
    let cut = (8 * n_g).div_ceil(10);
    ok &= trajectory[cut..].iter().all(|e| *e == 0.0);

    // the engine reports the same schedule shape
    let problem = builtin(DELAYED_FEAS, 5).unwrap();
    let mut small = AlgorithmConfig::new(AlgorithmKind::MoeadIeps);
    small.population_size = Some(40);
    small.generations = Some(30);
    small.moead.neighborhood = 10;
    let mut sink = Vec::<Evaluation>::new();
    let d: Diagnostics = run_algorithm(&problem, &small, 9, &mut sink).unwrap();
    let mut v0: Vec<f64> = sink[..40].iter().map(|e| e.v).collect();
    v0.sort_by(f64::total_cmp);
    ok &= d.epsilon[0] == v0[1] && d.epsilon[24..].iter().all(|e| *e == 0.0) && d.epsilon.len() == 30;

    (ok, format!("N_p {n_p}, N_g {n_g}, theta {theta}, zero from t = {cut}"))
}

fn reference_cdp(a: &Evaluation, b: &Evaluation) -> (Verdict, &'static str) {
    let dom = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(p, q)| p <= q) && x != y;
    match (a.v == 0.0, b.v == 0.0) {
        (true, true) if dom(&a.f, &b.f) => (Verdict::ABetter, "feasible dominance"),
        (true, true) if dom(&b.f, &a.f) => (Verdict::BBetter, "feasible dominance"),
        (true, true) => (Verdict::Tie, "feasible incomparable"),
        (true, false) => (Verdict::ABetter, "feasible vs infeasible"),
        (false, true) => (Verdict::BBetter, "feasible vs infeasible"),
        _ if a.v < b.v => (Verdict::ABetter, "violation"),
        _ if b.v < a.v => (Verdict::BBetter, "violation"),
        _ => (Verdict::Tie, "equal violation"),
    }
}

fn reference_eps(va: f64, vb: f64, ga: f64, gb: f64, eps: f64) -> (Verdict, &'static str) {
    let by = |x: f64, y: f64| match x.partial_cmp(&y).unwrap() {
        std::cmp::Ordering::Less => Verdict::ABetter,
        std::cmp::Ordering::Greater => Verdict::BBetter,
        std::cmp::Ordering::Equal => Verdict::Tie,
    };
    if va <= eps && vb <= eps {
        (by(ga, gb), "both within level")
    } else if va == vb {
        (by(ga, gb), "equal violation")
    } else {
        (by(va, vb), "violation")
    }
}

fn criterion_7() -> Outcome {
    let mut rng = RngStream::new(707);
    let mut ok = true;
    let mut cdp_branches = BTreeMap::<&str, usize>::new();
    let mut eps_branches = BTreeMap::<&str, usize>::new();
    // coarse grids make ties and equal violations common
    let grid = |rng: &mut RngStream, k: usize| rng.index(k) as f64 / k as f64;
    for _ in 0..10_000 {
        let m = 2 + rng.index(2);
        let pick = |rng: &mut RngStream| {
            let f: Vec<f64> = (0..m).map(|_| grid(rng, 4)).collect();
            let v = if rng.chance(0.4) { 0.0 } else { grid(rng, 3) };
            eval(f, v, 1)
        };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let (want, branch) = reference_cdp(&a, &b);
        *cdp_branches.entry(branch).or_default() += 1;
        ok &= cdp_compare(&a, &b) == want && cdp_compare(&b, &a) == want.flipped();

        let (va, vb, ga, gb, eps) = (
            grid(&mut rng, 5),
            grid(&mut rng, 5),
            grid(&mut rng, 5),
            grid(&mut rng, 5),
            grid(&mut rng, 5),
        );
        let (want, branch) = reference_eps(va, vb, ga, gb, eps);
        *eps_branches.entry(branch).or_default() += 1;
        ok &= eps_compare(va, vb, ga, gb, eps) == want && eps_compare(vb, va, gb, ga, eps) == want.flipped();
    }
    ok &= cdp_branches.len() == 5 && eps_branches.len() == 3;

    let mut sorts = 0;
    for k in 0..100 {
        let m = 2 + k % 2;
        let items: Vec<Evaluation> = (0..50)
            .map(|_| {
                let v = if rng.chance(0.6) { 0.0 } else { grid(&mut rng, 4) };
                eval((0..m).map(|_| grid(&mut rng, 6)).collect(), v, 1)
            })
            .collect();
        let better = |a: &Evaluation, b: &Evaluation| cdp_compare(a, b) == Verdict::ABetter;
        let mut fast = nondominated_sort(&items, better);
        let mut slow = brute_force_fronts(&items, better);
        for f in fast.iter_mut().chain(slow.iter_mut()) {
            f.sort_unstable();
        }
        if fast == slow {
            sorts += 1;
        }
    }
    ok &= sorts == 100;
    (
        ok,
        format!(
            "comparator branches cdp {:?} eps {:?}; sort matches brute force {sorts}/100",
            cdp_branches.values().collect::<Vec<_>>(),
            eps_branches.values().collect::<Vec<_>>()
        ),
    )
}

fn desk_config(out: &Path) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(&[LIN_TRUNC, DELAYED_FEAS, HOLE], &[5, 10], 10);
    c.master_seed = 2024;
    c.output = out.to_path_buf();
    c.store_traces = false;
    c
}

fn criterion_8(root: &Path) -> Outcome {
    let out = root.join("desk");
    let (mut store, summary) = run_experiment(&desk_config(&out), &Registry::with_builtins(), &RunOptions::default())
        .expect("desk experiment runs");
    let mut ok = summary.failed == 0;
    let labels = store.manifest.config.labels();

    // (a) no initial feasibility, eventual feasibility on DELAYED-FEAS, D = 10
    let mut a_notes = Vec::new();
    for alg in &labels {
        let cells = store.cells(DELAYED_FEAS, 10, alg);
        let infeasible_start = cells.iter().filter(|c| c.initial_feasible == 0).count();
        let records = store.runtime_records(DELAYED_FEAS, 10, alg).unwrap();
        let targets = make_targets(builtin(DELAYED_FEAS, 10).unwrap().meta()).unwrap();
        let classes = targets.classes();
        let crossed = records
            .iter()
            .filter(|r| {
                r.runtimes
                    .iter()
                    .zip(&classes)
                    .all(|(t, c)| *c == TargetClass::Plus || t.is_some())
            })
            .count();
        ok &= infeasible_start >= 9 && crossed == records.len() && records.len() == 10;
        a_notes.push(format!(
            "{alg} {infeasible_start}/10 infeasible start, {crossed}/10 crossed"
        ));
    }

    // (b) LIN-TRUNC precision
    let mut b_notes = Vec::new();
    for dim in [5, 10] {
        for alg in &labels {
            let hits = store
                .cells(LIN_TRUNC, dim, alg)
                .iter()
                .filter(|c| c.final_value.is_some_and(|v| v <= -0.49))
                .count();
            ok &= hits >= 9;
            b_notes.push(format!("D{dim} {alg} {hits}/10"));
        }
    }

    // (c) differences are in range and some pair is distinguishable
    emit_erd_report(&mut store, Grouping::Problem).unwrap();
    emit_delta_report(&mut store).unwrap();
    let mut max_delta = 0.0f64;
    for dim in [5, 10] {
        let mut r = csv::Reader::from_path(out.join(format!("reports/delta/D{dim}/delta.csv"))).unwrap();
        for row in r.records() {
            let d: f64 = row.unwrap()[3].parse().unwrap();
            ok &= (0.0..=1.0).contains(&d);
            max_delta = max_delta.max(d);
        }
    }
    ok &= max_delta > 0.01;
    (
        ok,
        format!(
            "(a) {}; (b) {}; (c) max delta {max_delta:.3}",
            a_notes.join(", "),
            b_notes.join(", ")
        ),
    )
}

fn csv_store(root: &Path) -> BTreeMap<String, Vec<u8>> {
    files_on_disk(root)
        .unwrap()
        .into_iter()
        .filter(|f| f.ends_with(".csv"))
        .map(|f| {
            let bytes = fs::read(root.join(&f)).unwrap();
            (f, bytes)
        })
        .collect()
}

fn criterion_9(root: &Path) -> Outcome {
    let run_once = |name: &str, workers: usize| {
        let out = root.join(name);
        let mut c = ExperimentConfig::new(&[LIN_TRUNC, DELAYED_FEAS, HOLE], &[5], 3);
        c.algorithms = AlgorithmKind::ALL
            .iter()
            .map(|k| {
                let mut e = cmop_cli::AlgorithmEntry::new(*k);
                e.algorithm.population_size = Some(30);
                e.algorithm.generations = Some(20);
                e.algorithm.moead.neighborhood = 8;
                AlgorithmSpec::Entry(e)
            })
            .collect();
        c.master_seed = 99;
        c.output = out.clone();
        let options = RunOptions {
            force: false,
            workers: Some(workers),
        };
        let (mut store, _) = run_experiment(&c, &Registry::with_builtins(), &options).unwrap();
        emit_erd_report(&mut store, Grouping::Suite).unwrap();
        emit_delta_report(&mut store).unwrap();
        csv_store(&out)
    };
    let first = run_once("repeat-a", 1);
    let second = run_once("repeat-b", 3);
    let differing = first.iter().filter(|(k, v)| second.get(*k) != Some(*v)).count();
    let ok = !first.is_empty() && first.len() == second.len() && differing == 0;
    (ok, format!("{} CSV files compared, {differing} differ", first.len()))
}

fn main() {
    let scratch = tempfile::tempdir().expect("scratch directory");
    let criteria: Vec<(u32, Duration, Check)> = vec![
        (1, Duration::from_secs(5), Box::new(criterion_1)),
        (2, Duration::from_secs(60), Box::new(criterion_2)),
        (3, Duration::from_secs(30), Box::new(criterion_3)),
        (4, Duration::from_secs(1), Box::new(criterion_4)),
        (5, Duration::from_secs(30), Box::new(criterion_5)),
        (6, Duration::from_secs(5), Box::new(criterion_6)),
        (7, Duration::from_secs(10), Box::new(criterion_7)),
        (
            8,
            Duration::from_secs(30 * 60),
            Box::new(|| criterion_8(scratch.path())),
        ),
        (9, Duration::from_secs(60), Box::new(|| criterion_9(scratch.path()))),
    ];
    let mut failed = 0;
    for (n, limit, check) in criteria {
        let start = Instant::now();
        let (ok, summary) = check();
        let took = start.elapsed();
        let ok = ok && took <= limit;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {n} {} ({:.2}s, limit {}s): {summary}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
