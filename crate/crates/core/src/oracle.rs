//! Monte-Carlo estimate of the hypervolume of a normalized point set with
//! reference point `(1, ..., 1)`, independent of the exact sweep.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    /// `sqrt(p (1 - p) / n)` for the hit proportion `p`.
    pub std_error: f64,
    pub samples: usize,
}

impl McEstimate {
    /// Whether `x` lies within `k` standard errors of the estimate.
    pub fn agrees(&self, x: f64, k: f64) -> bool {
        (x - self.value).abs() <= k * self.std_error
    }
}

/// Uniform samples in the unit cube, counted when weakly dominated by some
/// point.
pub fn monte_carlo_hypervolume(
    points: &[Vec<f64>],
    n_obj: usize,
    samples: usize,
    rng: &mut RngStream,
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::Precondition("at least one sample is required".into()));
    }
    if points.iter().any(|p| p.len() != n_obj) {
        return Err(Error::Domain(format!("points must have {n_obj} coordinates")));
    }
    let hits = match n_obj {
        2 => {
            let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let keys: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let mut low = f64::INFINITY;
            let prefix_min: Vec<f64> = pts
                .iter()
                .map(|p| {
                    low = low.min(p.1);
                    low
                })
                .collect();
            (0..samples)
                .filter(|_| {
                    let (u0, u1) = (rng.uniform(), rng.uniform());
                    let k = keys.partition_point(|x| *x <= u0);
                    k > 0 && prefix_min[k - 1] <= u1
                })
                .count()
        }
        3 => (0..samples)
            .filter(|_| {
                let u = [rng.uniform(), rng.uniform(), rng.uniform()];
                points.iter().any(|p| p[0] <= u[0] && p[1] <= u[1] && p[2] <= u[2])
            })
            .count(),
        m => return Err(Error::Unsupported(format!("{m} objectives"))),
    };
    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        value: p,
        std_error: (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
    })
}
