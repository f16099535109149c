//! Seeding and stream-splitting rules.
//!
//! Everything random in this crate flows through ChaCha8, a named, versioned
//! generator with identical output on every platform. Two rules cover all
//! uses:
//!
//! * [`stream`] turns a 64-bit seed into the root generator (stream 0).
//! * [`substream`] gives the `i`-th child generator for the same seed by
//!   selecting ChaCha stream `i`. Child indices start at 1, so children
//!   never collide with the root. The experiment harness uses one child per
//!   trial index, which makes each trial reproducible in isolation and the
//!   whole run independent of worker count.
//!
//! [`child_seed`] collapses a `(seed, index)` pair back into a plain 64-bit
//! seed (the first output of the corresponding substream) for APIs that
//! take seeds rather than generators.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Root generator for a seed: ChaCha8 on stream 0.
pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The `index`-th child generator for a seed. `index` must be ≥ 1; stream 0
/// is reserved for the root.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    debug_assert!(index >= 1, "substream indices start at 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A plain 64-bit child seed derived from `(seed, index)`: the first output
/// of [`substream`]. Used where an API takes a seed instead of a generator.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    substream(seed, index).next_u64()
}
