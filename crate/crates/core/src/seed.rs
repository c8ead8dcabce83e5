//! Seed expansion. Every random component draws from one 64-bit root seed,
//! mixed with a per-component tag so that components stay independent.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed of a sub-component identified by `tag`.
pub fn derive(seed: u64, tag: u64) -> u64 {
    mix64(mix64(seed) ^ tag.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

pub fn rng(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, tag))
}

// Component tags.
pub const TAG_HASH: u64 = 1;
pub const TAG_SPARSE: u64 = 2;
pub const TAG_OFFLINE_SAMPLE: u64 = 3;
pub const TAG_GENERATOR: u64 = 4;
pub const TAG_LOCAL_SEARCH: u64 = 5;
pub const TAG_TRIAL: u64 = 6;
