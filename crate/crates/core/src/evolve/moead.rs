use super::compare::{eps_compare, tchebycheff, EpsilonSchedule, Verdict};
use super::operators::{de_crossover, poly_mutation};
use super::sorting::{neighborhoods, simplex_weights};
use super::{component_min, AlgorithmConfig, Diagnostics, Evaluator, IndicatorSink};
use crate::error::Result;
use crate::problems::ProblemDefinition;
use crate::rng::{uniform_init, RngStream};

/// Decomposition EA with Tchebycheff subproblems and epsilon-level
/// replacement; the level follows [`EpsilonSchedule`] once per generation.
pub fn run_moead_ieps(
    problem: &ProblemDefinition,
    config: &AlgorithmConfig,
    seed: u64,
    sink: &mut dyn IndicatorSink,
) -> Result<Diagnostics> {
    let meta = problem.meta();
    let n_p = config.population_size_for(meta);
    let n_g = config.generations_for(meta);
    let params = &config.moead;
    let mut rng = RngStream::new(seed);
    let mut ev = Evaluator::new(problem, sink, config.budget_for(meta));
    let weights = simplex_weights(meta.n_obj, n_p);
    let hoods = neighborhoods(&weights, params.neighborhood);
    let everyone: Vec<usize> = (0..n_p).collect();

    let mut pop = uniform_init(&meta.bounds, n_p, &mut rng)
        .into_iter()
        .map(|x| ev.eval(x))
        .collect::<Result<Vec<_>>>()?;
    let initial_feasible = pop.iter().filter(|e| e.is_feasible()).count();
    let mut z = component_min(&pop, meta.n_obj);
    let mut schedule = EpsilonSchedule::new(config.schedule_params(meta));
    let violations: Vec<f64> = pop.iter().map(|e| e.v).collect();
    let mut trajectory = vec![schedule.update(feasible_ratio(&violations), &violations)];
    let mut max_replacements = 0;

    for _ in 1..n_g {
        let violations: Vec<f64> = pop.iter().map(|e| e.v).collect();
        let eps = schedule.update(feasible_ratio(&violations), &[]);
        trajectory.push(eps);
        for i in rng.permutation(n_p) {
            let pool = if rng.chance(params.mating_probability) {
                &hoods[i]
            } else {
                &everyone
            };
            let r1 = pool[rng.index(pool.len())];
            let mut r2 = pool[rng.index(pool.len())];
            while r2 == r1 && pool.len() > 1 {
                r2 = pool[rng.index(pool.len())];
            }
            let mut x = de_crossover(&pop[i].x, &pop[r1].x, &pop[r2].x, &meta.bounds, &config.de, &mut rng);
            poly_mutation(&mut x, &meta.bounds, &config.mutation, &mut rng);
            let child = ev.eval(x)?;
            schedule.observe(child.v);
            for (zm, fm) in z.iter_mut().zip(&child.f) {
                *zm = zm.min(*fm);
            }

            let mut order = pool.clone();
            rng.shuffle(&mut order);
            let mut replaced = 0;
            for j in order {
                if replaced == params.max_replacements {
                    break;
                }
                let g_child = tchebycheff(&child.f, &weights[j], &z);
                let g_old = tchebycheff(&pop[j].f, &weights[j], &z);
                if eps_compare(child.v, pop[j].v, g_child, g_old, eps) == Verdict::ABetter {
                    pop[j] = child.clone();
                    replaced += 1;
                }
            }
            max_replacements = max_replacements.max(replaced);
        }
    }

    Ok(Diagnostics {
        evaluations: ev.count(),
        initial_feasible,
        epsilon: trajectory,
        max_replacements,
        population: pop,
        diversity_archive: Vec::new(),
    })
}

fn feasible_ratio(violations: &[f64]) -> f64 {
    violations.iter().filter(|v| **v == 0.0).count() as f64 / violations.len() as f64
}
