//! Seeded random streams.
//!
//! Every stochastic routine takes a [`ChaCha8Rng`] built from a 64-bit seed.
//! Independent streams for ensemble members are derived from a master seed
//! with [`split_seed`], so a realization's stream depends only on its
//! coordinates and never on scheduling or worker count.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed of realization `realization` in cell `cell` from `master`.
///
/// `split(master, cell, realization) = mix(mix(mix(master) ^ cell) ^ realization)`
/// with `mix` the SplitMix64 output function.
pub fn split_seed(master: u64, cell: u64, realization: u64) -> u64 {
    mix64(mix64(mix64(master) ^ cell) ^ realization)
}
