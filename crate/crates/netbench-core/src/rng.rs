//! Seed derivation for reproducible, independently parallelizable RNG streams.
//!
//! Every stochastic operation derives its stream from a master seed plus a
//! purpose tag and item index, so results are identical regardless of thread
//! count or evaluation order, and extending a run (more samples, more runs)
//! leaves earlier items unchanged.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tags keeping unrelated streams disjoint under one master seed.
pub mod tag {
    /// One ESWR sample (size draw + walk).
    pub const ESWR_SAMPLE: u64 = 0x4553_5752;
    /// One R-MAT generation.
    pub const RMAT_GENERATE: u64 = 0x524d_4154;
    /// SIR runs inside suite evaluation.
    pub const SUITE_SIR: u64 = 0x5349_5221;
    /// Louvain runs inside suite evaluation.
    pub const SUITE_LOUVAIN: u64 = 0x4c4f_5556;
    /// Louvain runs inside dataset summaries.
    pub const SUMMARY_LOUVAIN: u64 = 0x534d_4c56;
    /// Train/test split shuffling.
    pub const SPLIT: u64 = 0x5350_4c54;
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mix a master seed with a sequence of tags into a derived seed.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &t in tags {
        state = splitmix64(state ^ t);
    }
    state
}

/// A ChaCha stream for `(master, tags)`; stable across platforms and releases.
pub fn stream(master: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, tags))
}
