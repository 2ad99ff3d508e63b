use super::compare::{cdp_compare, Verdict};
use super::operators::{poly_mutation, sbx};
use super::sorting::{crowding_distance, niche_fill, nondominated_sort, simplex_weights};
use super::{cdp_tournament, component_min, AlgorithmConfig, Diagnostics, Evaluator, IndicatorSink};
use crate::error::Result;
use crate::problems::ProblemDefinition;
use crate::rng::{uniform_init, RngStream};
use crate::types::Evaluation;

/// Generational EA: tournament selection and environmental selection by
/// constrained-domination fronts, with crowding distance (two objectives) or
/// reference-direction niching (three objectives) on the split front.
pub fn run_cdp_ea(
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
    let directions = if meta.n_obj == 3 {
        simplex_weights(3, n_p)
    } else {
        Vec::new()
    };

    let mut pop = uniform_init(&meta.bounds, n_p, &mut rng)
        .into_iter()
        .map(|x| ev.eval(x))
        .collect::<Result<Vec<_>>>()?;
    let initial_feasible = pop.iter().filter(|e| e.is_feasible()).count();

    for _ in 1..n_g {
        let mut offspring = Vec::with_capacity(n_p);
        while offspring.len() < n_p {
            let a = cdp_tournament(&pop, &mut rng);
            let b = cdp_tournament(&pop, &mut rng);
            let (mut c1, mut c2) = sbx(&pop[a].x, &pop[b].x, &meta.bounds, &config.sbx, &mut rng);
            poly_mutation(&mut c1, &meta.bounds, &config.mutation, &mut rng);
            poly_mutation(&mut c2, &meta.bounds, &config.mutation, &mut rng);
            offspring.push(ev.eval(c1)?);
            if offspring.len() < n_p {
                offspring.push(ev.eval(c2)?);
            }
        }
        pop.extend(offspring);
        pop = select(pop, n_p, meta.n_obj, &directions, &mut rng);
    }

    Ok(Diagnostics {
        evaluations: ev.count(),
        initial_feasible,
        population: pop,
        ..Diagnostics::default()
    })
}

fn select(
    combined: Vec<Evaluation>,
    n: usize,
    n_obj: usize,
    directions: &[Vec<f64>],
    rng: &mut RngStream,
) -> Vec<Evaluation> {
    let fronts = nondominated_sort(&combined, |a, b| cdp_compare(a, b) == Verdict::ABetter);
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    for front in fronts {
        if chosen.len() + front.len() <= n {
            chosen.extend(front);
            if chosen.len() == n {
                break;
            }
            continue;
        }
        let last: Vec<&[f64]> = front.iter().map(|i| combined[*i].f.as_slice()).collect();
        if n_obj == 3 {
            let kept: Vec<&[f64]> = chosen.iter().map(|i| combined[*i].f.as_slice()).collect();
            let z = component_min(&combined, n_obj);
            for k in niche_fill(&kept, &last, n, directions, &z, rng) {
                chosen.push(front[k]);
            }
        } else {
            let d = crowding_distance(&last);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|a, b| d[*b].total_cmp(&d[*a]));
            let need = n - chosen.len();
            chosen.extend(order.into_iter().take(need).map(|k| front[k]));
        }
        break;
    }
    let mut slots: Vec<Option<Evaluation>> = combined.into_iter().map(Some).collect();
    chosen
        .into_iter()
        .map(|i| slots[i].take().expect("indices are distinct"))
        .collect()
}
