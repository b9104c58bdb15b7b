//! Deterministic sampling.
//!
//! All randomized operations in this crate draw from [`SeededRng`], a thin
//! wrapper over the ChaCha8 stream cipher. The sampling routines (bounded
//! draws, shuffles) are written out here rather than taken from a helper
//! crate so that a given seed produces the same results on every platform
//! and under future dependency upgrades: the output is a function of the
//! ChaCha8 byte stream alone.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct SeededRng {
    rng: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform draw from `0..n` by rejection, so no modulo bias.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let threshold = u64::MAX - u64::MAX % n;
        loop {
            let x = self.rng.next_u64();
            if x < threshold {
                return x % n;
            }
        }
    }

    /// Fisher–Yates shuffle, swapping from the back.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    /// `k` distinct values from `0..n`, returned sorted.
    pub fn distinct_below(&mut self, n: u64, k: usize) -> Vec<u64> {
        assert!(k as u64 <= n, "cannot draw {k} distinct values below {n}");
        let mut pool: Vec<u64> = (0..n).collect();
        self.shuffle(&mut pool);
        let mut picked: Vec<u64> = pool.into_iter().take(k).collect();
        picked.sort_unstable();
        picked
    }
}
