//! Seeded randomness for the randomized search steps (isomorphism tests,
//! endomorphism sampling).  Results never depend on luck for correctness;
//! the seed only fixes which witnesses are found, so runs are reproducible.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_a11e;

static SEED: AtomicU64 = AtomicU64::new(DEFAULT_SEED);

/// Sets the process-wide seed.
pub fn set_seed(seed: u64) {
    SEED.store(seed, Ordering::SeqCst);
}

pub fn seed() -> u64 {
    SEED.load(Ordering::SeqCst)
}

/// A generator derived from the global seed and a caller-provided tag, so
/// that independent call sites do not share a stream.
pub fn stream(tag: u64) -> ChaCha8Rng {
    let mut z = seed() ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    // splitmix64 finaliser
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}
