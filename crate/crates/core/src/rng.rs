//! Deterministic seed derivation.
//!
//! Every random decision in the toolkit flows from the single `seed` field of
//! the run configuration. Sub-streams are derived by hashing a domain label
//! and a key (usually an instance id) together with the base seed, so results
//! are independent of iteration order and stable across platforms.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// FNV-1a over the label bytes, then a splitmix64 finalizer to spread bits.
fn mix(seed: u64, domain: &str, key: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in domain
        .as_bytes()
        .iter()
        .chain([0xff_u8].iter())
        .chain(key.as_bytes().iter())
        .chain(seed.to_le_bytes().iter())
    {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    // splitmix64 finalizer
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a sub-seed for a (domain, key) pair.
pub fn derive_seed(seed: u64, domain: &str, key: &str) -> u64 {
    mix(seed, domain, key)
}

/// A seeded RNG stream for a (domain, key) pair.
pub fn rng_for(seed: u64, domain: &str, key: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, domain, key))
}
