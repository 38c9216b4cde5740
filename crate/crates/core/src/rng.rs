//! Seeded random streams.
//!
//! Every random quantity is drawn from a ChaCha8 stream seeded with a
//! 64-bit value. Child streams (one per replicate, one per start sample)
//! are keyed by mixing the parent seed with the child index through the
//! SplitMix64 finaliser, so a replicate's stream depends only on
//! `(base_seed, replicate_index)` and never on scheduling.
//!
//! Conversions from raw 64-bit words are implemented here rather than
//! borrowed from a distribution library so the exact bit-level recipe is
//! fixed:
//!
//! * uniform reals use the top 53 bits plus one half ulp, giving values in
//!   the open interval `(0, 1)`;
//! * exponentials use the inverse CDF `-mean * ln(1 - U)`;
//! * bounded integers use rejection sampling on the top of the 64-bit range.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of child stream `index` under `base`.
pub fn stream_seed(base: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base).wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1))))
}

pub fn stream(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the open interval `(0, 1)`.
#[inline]
pub fn uniform_open01<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Exponential with the given mean; always strictly positive and finite.
#[inline]
pub fn exponential<R: RngCore>(rng: &mut R, mean: f64) -> f64 {
    -mean * (1.0 - uniform_open01(rng)).ln()
}

/// Uniform integer in `0..bound`.
pub fn uniform_index<R: RngCore>(rng: &mut R, bound: usize) -> usize {
    assert!(bound > 0, "empty range");
    let bound = bound as u64;
    let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
    loop {
        let x = rng.next_u64();
        if x <= zone {
            return (x % bound) as usize;
        }
    }
}

/// `k` distinct indices from `0..n` (partial Fisher-Yates), in draw order.
pub fn sample_without_replacement<R: RngCore>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    assert!(k <= n, "cannot draw {k} distinct values from {n}");
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + uniform_index(rng, n - i);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}
