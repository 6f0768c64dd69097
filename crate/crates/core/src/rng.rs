//! Seeded random state.
//!
//! Every random draw in the crate goes through [`SeededRng`], which is
//! ChaCha with 8 rounds (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`. The stream is fixed by the algorithm and the
//! locked crate versions, so a seed reproduces the same draws across builds
//! and platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer (Steele, Lea & Flood).
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of trial `(pair, replicate)` from a base seed.
///
/// `mix(b, p, r) = splitmix64(splitmix64(splitmix64(b) ^ p) ^ r)`. Each trial
/// seed depends only on its own indices, so trials can run in any order or
/// in parallel without changing their streams.
pub fn mix_seed(base: u64, pair_index: u64, replicate_index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ pair_index) ^ replicate_index)
}
