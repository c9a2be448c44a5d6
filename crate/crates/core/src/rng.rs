//! Seeded random substreams.
//!
//! Every randomized routine draws from a [`ChaCha8Rng`] derived from a base
//! seed and a task label, so the numbers a task sees do not depend on which
//! thread runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable hash of a sequence of task identifiers onto a base seed.
pub fn derive_seed(base: u64, task: &[u64]) -> u64 {
    task.iter().fold(splitmix64(base), |acc, &t| splitmix64(acc ^ splitmix64(t)))
}

pub fn substream(base: u64, task: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(base, task))
}

/// Task-label namespaces so independent modules never share a stream.
pub mod stream {
    pub const BETA: u64 = 1;
    pub const NORMS: u64 = 2;
    pub const EIGEN: u64 = 3;
    pub const TCP_ENUM: u64 = 4;
    pub const TCP_ITER: u64 = 5;
    pub const GENERATOR: u64 = 6;
    pub const BOUNDS_Q: u64 = 7;
    pub const COPOSITIVE: u64 = 8;
    pub const PARETO_MIN: u64 = 9;
}
