//! Seeded, portable random stream used by scene generation, RANSAC and
//! N-sampling.
//!
//! The stream is ChaCha with 8 rounds keyed by `seed_from_u64` (rand_core's
//! PCG32-based seed expansion). Derived draws are fixed here so other
//! implementations can reproduce them:
//!
//! * `uniform()`: `(next_u64 >> 11) * 2^-53`, in `[0, 1)`.
//! * `normal()`: Box-Muller, `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`, one
//!   variate per pair of uniforms (the sine branch is discarded).
//! * `below(n)`: `floor(uniform() * n)`.
//! * `sample_indices(n, k)`: partial Fisher-Yates over `0..n`, swapping slot
//!   `i` with `i + below(n - i)` for `i` in `0..k`.

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name recorded in scene file headers.
pub const PRNG_NAME: &str = "chacha8-seed_from_u64/u53-uniform/box-muller-cos";

#[derive(Debug, Clone)]
pub struct Prng(ChaCha8Rng);

impl Prng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn below(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    /// `k` distinct indices from `0..n`, in draw order.
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot draw {k} distinct indices from {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}
