//! Seeded randomness shared by every stochastic component.
//!
//! All randomness flows through [`ChaCha8Rng`] so results are reproducible
//! across platforms, and sub-seeds are derived with a fixed integer mixer
//! rather than `std`'s hasher, whose output is not stable across releases.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from a parent seed and a sequence of tags.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(mix64(base), |acc, &t| mix64(acc ^ mix64(t)))
}

/// Stable 64-bit hash of a bit pattern.
pub fn hash_bits(bits: &[bool]) -> u64 {
    let mut h = mix64(bits.len() as u64);
    for chunk in bits.chunks(64) {
        let mut word = 0u64;
        for (i, &b) in chunk.iter().enumerate() {
            if b {
                word |= 1 << i;
            }
        }
        h = mix64(h ^ word);
    }
    h
}
