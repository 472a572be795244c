//! Seeded random streams.
//!
//! Every sampler takes an explicit `&mut StdRng`-like handle. The concrete
//! generator is ChaCha8; its identifier is written into corpus metadata so a
//! corpus can only be regenerated bit-for-bit by a build using the same
//! algorithm.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Algorithm identifier recorded in corpus headers.
pub const RNG_ALGORITHM: &str = "chacha8";

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent child stream from `seed` and a task index.
///
/// Used wherever work is split across threads: each task gets its own
/// stream, so results never depend on scheduling.
pub fn split(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}
