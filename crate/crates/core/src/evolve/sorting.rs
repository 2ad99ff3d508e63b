//! Nondominated sorting, crowding distance, and reference-direction niching.

use super::compare::tchebycheff;

/// Fronts of `items` under the strict partial order `better`, as index
/// lists; front `k` is nondominated once fronts `0..k` are removed.
pub fn nondominated_sort<T>(items: &[T], better: impl Fn(&T, &T) -> bool) -> Vec<Vec<usize>> {
    let n = items.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if better(&items[i], &items[j]) {
                dominates[i].push(j);
                dominated_by[j] += 1;
            } else if better(&items[j], &items[i]) {
                dominates[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|i| dominated_by[*i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of each point within its set; extremes get infinity.
#[allow(clippy::needless_range_loop)]
pub fn crowding_distance(points: &[&[f64]]) -> Vec<f64> {
    let n = points.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = points[0].len();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        order.sort_by(|a, b| points[*a][k].total_cmp(&points[*b][k]));
        let lo = points[order[0]][k];
        let hi = points[order[n - 1]][k];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        if hi > lo {
            for w in order.windows(3) {
                dist[w[1]] += (points[w[2]][k] - points[w[0]][k]) / (hi - lo);
            }
        }
    }
    dist
}

/// Uniformly spread weight vectors on the unit simplex.
///
/// Two objectives give evenly spaced points; three objectives use the
/// smallest simplex lattice with at least `n` points, thinned to `n` evenly
/// across its enumeration order.
pub fn simplex_weights(n_obj: usize, n: usize) -> Vec<Vec<f64>> {
    match n_obj {
        2 if n == 1 => vec![vec![0.5, 0.5]],
        2 => (0..n)
            .map(|i| {
                let w = i as f64 / (n - 1) as f64;
                vec![w, 1.0 - w]
            })
            .collect(),
        3 => {
            let mut h = 1;
            while (h + 1) * (h + 2) / 2 < n {
                h += 1;
            }
            let mut lattice = Vec::new();
            for i in 0..=h {
                for j in 0..=h - i {
                    let k = h - i - j;
                    lattice.push(vec![i as f64 / h as f64, j as f64 / h as f64, k as f64 / h as f64]);
                }
            }
            let total = lattice.len();
            if total == n {
                lattice
            } else {
                (0..n).map(|s| lattice[s * total / n].clone()).collect()
            }
        }
        _ => panic!("weights are defined for 2 or 3 objectives"),
    }
}

/// Indices of the `t` weights closest to each weight (itself included).
pub fn neighborhoods(weights: &[Vec<f64>], t: usize) -> Vec<Vec<usize>> {
    let t = t.min(weights.len());
    weights
        .iter()
        .map(|w| {
            let mut idx: Vec<(f64, usize)> = weights
                .iter()
                .enumerate()
                .map(|(j, u)| {
                    let d: f64 = w.iter().zip(u).map(|(a, b)| (a - b) * (a - b)).sum();
                    (d, j)
                })
                .collect();
            idx.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            idx.into_iter().take(t).map(|(_, j)| j).collect()
        })
        .collect()
}

/// Index of the direction closest to `p - z` in perpendicular distance, and
/// that distance.
pub fn associate(p: &[f64], z: &[f64], directions: &[Vec<f64>]) -> (usize, f64) {
    let q: Vec<f64> = p.iter().zip(z).map(|(a, b)| a - b).collect();
    let mut best = (0, f64::INFINITY);
    for (j, w) in directions.iter().enumerate() {
        let ww: f64 = w.iter().map(|x| x * x).sum();
        let t = q.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / ww;
        let d: f64 = q
            .iter()
            .zip(w)
            .map(|(a, b)| (a - t * b) * (a - t * b))
            .sum::<f64>()
            .sqrt();
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Removes members of `last` until `kept.len() + last.len() == target`: each
/// step picks the most crowded niche (counting both sets) that still holds a
/// `last` member and drops that niche's `last` member with the largest
/// aggregated value. Returns the surviving indices into `last`.
pub fn niche_truncate(
    kept: &[&[f64]],
    last: &[&[f64]],
    target: usize,
    directions: &[Vec<f64>],
    z: &[f64],
) -> Vec<usize> {
    let mut counts = vec![0usize; directions.len()];
    for p in kept {
        counts[associate(p, z, directions).0] += 1;
    }
    let mut members: Vec<(usize, usize, f64)> = last
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (j, _) = associate(p, z, directions);
            counts[j] += 1;
            (i, j, tchebycheff(p, &directions[j], z))
        })
        .collect();
    let keep = target.saturating_sub(kept.len());
    while members.len() > keep {
        let niche = members
            .iter()
            .map(|m| m.1)
            .max_by(|a, b| counts[*a].cmp(&counts[*b]).then(b.cmp(a)))
            .expect("nonempty");
        let (pos, _) = members
            .iter()
            .enumerate()
            .filter(|(_, m)| m.1 == niche)
            .max_by(|a, b| a.1 .2.total_cmp(&b.1 .2).then(b.1 .0.cmp(&a.1 .0)))
            .expect("niche has a member");
        counts[niche] -= 1;
        members.remove(pos);
    }
    members.into_iter().map(|m| m.0).collect()
}

/// Fills up to `target` members from the niches of `last`, least crowded
/// niche first: an empty niche receives its member closest to the direction,
/// a populated one a random member. Returns the chosen indices into `last`.
pub fn niche_fill(
    kept: &[&[f64]],
    last: &[&[f64]],
    target: usize,
    directions: &[Vec<f64>],
    z: &[f64],
    rng: &mut crate::rng::RngStream,
) -> Vec<usize> {
    let mut counts = vec![0usize; directions.len()];
    for p in kept {
        counts[associate(p, z, directions).0] += 1;
    }
    let mut pending: Vec<(usize, usize, f64)> = last
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (j, d) = associate(p, z, directions);
            (i, j, d)
        })
        .collect();
    let mut chosen = Vec::new();
    let need = target.saturating_sub(kept.len()).min(last.len());
    while chosen.len() < need {
        let min_count = pending.iter().map(|m| counts[m.1]).min().expect("nonempty");
        let mut niches: Vec<usize> = pending
            .iter()
            .filter(|m| counts[m.1] == min_count)
            .map(|m| m.1)
            .collect();
        niches.sort_unstable();
        niches.dedup();
        let niche = niches[rng.index(niches.len())];
        let candidates: Vec<usize> = (0..pending.len()).filter(|k| pending[*k].1 == niche).collect();
        let pos = if counts[niche] == 0 {
            *candidates
                .iter()
                .min_by(|a, b| pending[**a].2.total_cmp(&pending[**b].2))
                .expect("nonempty")
        } else {
            candidates[rng.index(candidates.len())]
        };
        counts[niche] += 1;
        chosen.push(pending.remove(pos).0);
    }
    chosen
}
