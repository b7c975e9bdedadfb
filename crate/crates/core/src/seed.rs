//! Deterministic seeding. Every random choice in the crate is drawn from a
//! ChaCha8 stream keyed by a 64-bit seed, with independent components placed
//! on distinct ChaCha stream ids of the same key.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Name recorded in parameter files so instances can be replayed.
pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.9/seed_from_u64+stream";

pub type FqhRng = ChaCha8Rng;

/// Generator for stream `stream` of `seed`.
pub fn component_rng(seed: u64, stream: u64) -> FqhRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
