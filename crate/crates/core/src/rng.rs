//! Seeded random sources.
//!
//! Every run owns its generators. A run seed feeds two independent ChaCha
//! streams: one consumed only by population seeding and one consumed only by
//! the generational loop, so changing the seeding method never shifts the
//! draws the evolution sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type RunRng = ChaCha8Rng;

const EVOLUTION_STREAM: u64 = 0;
const SEEDING_STREAM: u64 = 1;

pub fn seeded(seed: u64) -> RunRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn evolution_rng(seed: u64) -> RunRng {
    with_stream(seed, EVOLUTION_STREAM)
}

pub fn seeding_rng(seed: u64) -> RunRng {
    with_stream(seed, SEEDING_STREAM)
}

fn with_stream(seed: u64, stream: u64) -> RunRng {
    let mut rng = seeded(seed);
    rng.set_stream(stream);
    rng
}
