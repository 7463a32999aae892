//! Index-derived random substreams.
//!
//! Every randomized routine derives one generator per work item from `(seed, index)`, so results
//! do not depend on how items are scheduled across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for work item `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A child seed for nested randomized routines (e.g. one seed per meta-trial).
pub fn child_seed(seed: u64, index: u64) -> u64 {
    use rand::RngCore;
    substream(seed ^ 0x9e37_79b9_7f4a_7c15, index).next_u64()
}
