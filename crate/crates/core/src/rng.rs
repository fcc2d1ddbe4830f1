//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha20 generator keyed
//! by `(seed, stream)`. A stream is further split into disjoint blocks by
//! jumping the generator's word position, so batch `b` of a Monte Carlo run
//! always sees the same draws regardless of which thread evaluates it.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Number of 32-bit words reserved for each block (`2^40`).
const BLOCK_SHIFT: u32 = 40;
/// ChaCha20's word position is 68 bits wide.
pub const MAX_BLOCKS: u64 = 1 << (68 - BLOCK_SHIFT);

pub type StreamRng = ChaCha20Rng;

/// Generator for `(seed, stream)`, positioned at the start of the stream.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    block_rng(seed, stream, 0)
}

/// Generator for block `block` of `(seed, stream)`.
///
/// # Panics
///
/// If `block >= MAX_BLOCKS`.
pub fn block_rng(seed: u64, stream: u64, block: u64) -> StreamRng {
    assert!(block < MAX_BLOCKS, "block index {block} out of range");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos((block as u128) << BLOCK_SHIFT);
    rng
}
