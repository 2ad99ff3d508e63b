use super::compare::tchebycheff;
use super::operators::{poly_mutation, sbx};
use super::sorting::{associate, niche_truncate, nondominated_sort, simplex_weights};
use super::{cdp_tournament, component_min, AlgorithmConfig, Diagnostics, Evaluator, IndicatorSink};
use crate::error::Result;
use crate::pareto::dominates;
use crate::problems::ProblemDefinition;
use crate::rng::{uniform_init, RngStream};
use crate::types::Evaluation;

/// Two-archive EA. The convergence archive keeps feasible solutions first
/// and ranks the infeasible rest by (violation, aggregated value); the
/// diversity archive ranks by objectives alone. Parent 2 comes from the
/// convergence archive with probability equal to the share of its members
/// on its own first front.
pub fn run_two_archive(
    problem: &ProblemDefinition,
    config: &AlgorithmConfig,
    seed: u64,
    sink: &mut dyn IndicatorSink,
) -> Result<Diagnostics> {
    let meta = problem.meta();
    let n_p = config.population_size_for(meta);
    let n_g = config.generations_for(meta);
    let mut rng = RngStream::new(seed);
    let mut ev = Evaluator::new(problem, sink, config.budget_for(meta));
    let weights = simplex_weights(meta.n_obj, n_p);

    let init = uniform_init(&meta.bounds, n_p, &mut rng)
        .into_iter()
        .map(|x| ev.eval(x))
        .collect::<Result<Vec<_>>>()?;
    let initial_feasible = init.iter().filter(|e| e.is_feasible()).count();
    let mut z = component_min(&init, meta.n_obj);
    let mut ca = update_convergence(init.clone(), n_p, &weights, &z);
    let mut da = update_diversity(init, n_p, &weights, &z);

    for _ in 1..n_g {
        let fronts = nondominated_sort(&ca, |a, b| dominates(&a.f, &b.f));
        let ca_share = fronts[0].len() as f64 / ca.len() as f64;
        let mut offspring = Vec::with_capacity(n_p);
        while offspring.len() < n_p {
            let p1 = &ca[cdp_tournament(&ca, &mut rng)];
            let p2 = if rng.chance(ca_share) {
                &ca[cdp_tournament(&ca, &mut rng)]
            } else {
                &da[rng.index(da.len())]
            };
            let (mut c1, mut c2) = sbx(&p1.x, &p2.x, &meta.bounds, &config.sbx, &mut rng);
            poly_mutation(&mut c1, &meta.bounds, &config.mutation, &mut rng);
            poly_mutation(&mut c2, &meta.bounds, &config.mutation, &mut rng);
            offspring.push(ev.eval(c1)?);
            if offspring.len() < n_p {
                offspring.push(ev.eval(c2)?);
            }
        }
        for e in &offspring {
            for (zm, fm) in z.iter_mut().zip(&e.f) {
                *zm = zm.min(*fm);
            }
        }
        let mut hybrid = ca;
        hybrid.extend(offspring.iter().cloned());
        ca = update_convergence(hybrid, n_p, &weights, &z);
        let mut hybrid = da;
        hybrid.extend(offspring);
        da = update_diversity(hybrid, n_p, &weights, &z);
    }

    Ok(Diagnostics {
        evaluations: ev.count(),
        initial_feasible,
        population: ca,
        diversity_archive: da,
        ..Diagnostics::default()
    })
}

/// Fills whole fronts, then niche-truncates the split front.
fn fill_by_fronts(pool: Vec<Evaluation>, n: usize, weights: &[Vec<f64>], z: &[f64]) -> Vec<Evaluation> {
    if pool.len() <= n {
        return pool;
    }
    let fronts = nondominated_sort(&pool, |a, b| dominates(&a.f, &b.f));
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    for front in fronts {
        if chosen.len() + front.len() <= n {
            chosen.extend(front);
            continue;
        }
        let kept: Vec<&[f64]> = chosen.iter().map(|i| pool[*i].f.as_slice()).collect();
        let last: Vec<&[f64]> = front.iter().map(|i| pool[*i].f.as_slice()).collect();
        for k in niche_truncate(&kept, &last, n, weights, z) {
            chosen.push(front[k]);
        }
        break;
    }
    take(pool, chosen)
}

fn take(pool: Vec<Evaluation>, mut indices: Vec<usize>) -> Vec<Evaluation> {
    indices.sort_unstable();
    let mut slots: Vec<Option<Evaluation>> = pool.into_iter().map(Some).collect();
    indices
        .into_iter()
        .map(|i| slots[i].take().expect("indices are distinct"))
        .collect()
}

fn update_convergence(hybrid: Vec<Evaluation>, n: usize, weights: &[Vec<f64>], z: &[f64]) -> Vec<Evaluation> {
    let (feasible, infeasible): (Vec<Evaluation>, Vec<Evaluation>) =
        hybrid.into_iter().partition(Evaluation::is_feasible);
    if feasible.len() >= n {
        return fill_by_fronts(feasible, n, weights, z);
    }
    let keys: Vec<[f64; 2]> = infeasible
        .iter()
        .map(|e| {
            let (j, _) = associate(&e.f, z, weights);
            [e.v, tchebycheff(&e.f, &weights[j], z)]
        })
        .collect();
    let fronts = nondominated_sort(&keys, |a, b| dominates(a, b));
    let room = n - feasible.len();
    let mut chosen: Vec<usize> = Vec::with_capacity(room);
    for mut front in fronts {
        if chosen.len() + front.len() <= room {
            chosen.extend(front);
            continue;
        }
        front.sort_by(|a, b| keys[*a][0].total_cmp(&keys[*b][0]).then(a.cmp(b)));
        chosen.extend(front.into_iter().take(room - chosen.len()));
        break;
    }
    let mut ca = feasible;
    ca.extend(take(infeasible, chosen));
    ca
}

fn update_diversity(hybrid: Vec<Evaluation>, n: usize, weights: &[Vec<f64>], z: &[f64]) -> Vec<Evaluation> {
    fill_by_fronts(hybrid, n, weights, z)
}
