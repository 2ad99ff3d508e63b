//! Pareto dominance on objective vectors (minimization).

/// `a` dominates `b`: no worse in every objective, strictly better in one.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// `a` is no worse than `b` in every objective (includes equality).
pub fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Every coordinate strictly below 1, i.e. the point strictly dominates the
/// normalized nadir `(1, ..., 1)`.
pub fn strictly_below_reference(p: &[f64]) -> bool {
    p.iter().all(|c| *c < 1.0)
}
