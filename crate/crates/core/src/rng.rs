//! Seeded randomness. Every random choice in the crate draws from ChaCha8,
//! whose output stream is fixed across platforms for a given seed and stream id.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.3), seed_from_u64 + set_stream";

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for sample `index` of a given `kind` under `seed`.
pub fn stream(seed: u64, kind: u8, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((kind as u64) << 56) | (index & ((1 << 56) - 1)));
    rng
}

pub fn shuffled<T: Clone>(items: &[T], seed: u64) -> Vec<T> {
    let mut out = items.to_vec();
    out.shuffle(&mut seeded(seed));
    out
}
