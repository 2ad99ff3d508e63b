//! Seeded, replayable randomness.
//!
//! Every stream is a ChaCha8 generator seeded from a 64-bit value, so the
//! generated sequence is identical on every platform. Per-run seeds are
//! derived from a master seed with [`derive_seed`].

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::types::BoxBounds;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, b| (h ^ u64::from(*b)).wrapping_mul(FNV_PRIME))
}

/// SplitMix64 finalizer. Bijective on u64.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed of one run.
///
/// The canonical string `problem \x1f algorithm \x1f run_index` is hashed with
/// 64-bit FNV-1a, XORed with `master_seed`, and passed through the SplitMix64
/// finalizer. For fixed identifiers the map is a bijection of `master_seed`.
pub fn derive_seed(master_seed: u64, problem: &str, algorithm: &str, run_index: u32) -> u64 {
    let canonical = format!("{problem}\u{1f}{algorithm}\u{1f}{run_index}");
    mix64(fnv1a(canonical.as_bytes()) ^ master_seed)
}

/// A single-owner random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        items.shuffle(&mut self.inner);
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..n).collect();
        self.shuffle(&mut idx);
        idx
    }
}

/// Samples `n` search vectors independently and uniformly from the box.
pub fn uniform_init(bounds: &BoxBounds, n: usize, rng: &mut RngStream) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            bounds
                .lower()
                .iter()
                .zip(bounds.upper())
                .map(|(lo, hi)| rng.uniform_in(*lo, *hi))
                .collect()
        })
        .collect()
}
