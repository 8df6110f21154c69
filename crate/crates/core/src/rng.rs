//! Seeded, counter-based random streams.
//!
//! Every stochastic routine takes an explicit `u64` seed. Independent
//! sub-streams are ChaCha8 streams selected by index, so the numbers drawn
//! for replicate `i` do not depend on how replicates are split across
//! threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Generator for `seed`, stream 0.
pub fn seeded(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for `seed` positioned at the start of stream `stream`.
pub fn substream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Reuses a keyed base generator to avoid re-deriving the key per stream.
#[derive(Clone)]
pub struct StreamFactory {
    base: ChaCha8Rng,
}

impl StreamFactory {
    pub fn new(seed: u64) -> Self {
        Self { base: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn stream(&self, index: u64) -> StreamRng {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        rng.set_word_pos(0);
        rng
    }
}
