//! Counter-based randomness.
//!
//! Every random quantity in the crate is addressed by `(seed, stream, index)`
//! through ChaCha8's stream and word-position counters, so values do not
//! depend on generation order and can be produced in parallel.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream tags keep unrelated consumers of one seed apart.
pub mod stream {
    pub const FORM_ENTRIES: u64 = 1;
    pub const ASCENT_START: u64 = 2;
    pub const TRIAL_SEED: u64 = 3;
    pub const EXPERIMENT: u64 = 4;
}

/// A generator positioned at the start of `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Deterministic sub-seed for item `index` of `stream` under `seed`.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut rng = stream_rng(seed, stream);
    rng.set_word_pos(u128::from(index) * 2);
    rng.next_u64()
}

/// Uniform value in `[0, 1)` from 53 random bits.
pub(crate) fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
