//! Seeded random streams.
//!
//! Every randomized operation takes a generic [`rand::Rng`]; the CLI and the
//! table collectors use [`stream_rng`], a ChaCha8 generator keyed by a 64-bit
//! seed and a stream index, so that parallel workers draw from independent
//! and reproducible sequences.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SamplerRng = ChaCha8Rng;

/// Generator for `(seed, stream)`. Identical arguments give identical
/// output sequences.
pub fn stream_rng(seed: u64, stream: u64) -> SamplerRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
