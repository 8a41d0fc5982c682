//! Seeded random streams. Each `(seed, stream)` pair gives an independent
//! ChaCha8 sequence so graph structure, weights and distributions never
//! share draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
