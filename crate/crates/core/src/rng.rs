//! Deterministic random streams.
//!
//! Every randomized operation derives its own stream from a master seed and a
//! structural path (replication index, estimator term, permutation, ...).
//! Two runs with the same master seed and the same path see the same stream,
//! no matter how work is scheduled across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Master seed plus the stream-derivation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngConfig {
    master_seed: u64,
}

impl RngConfig {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Root of the stream tree for this configuration.
    pub fn root(&self) -> RngStream {
        RngStream {
            state: splitmix64(self.master_seed ^ 0x6d75_6c74_6964_6570),
        }
    }

    /// Stream for an explicit derivation path.
    pub fn derive(&self, path: &[u64]) -> ChaCha12Rng {
        let mut stream = self.root();
        for &tag in path {
            stream = stream.fork(tag);
        }
        stream.rng()
    }
}

impl Default for RngConfig {
    fn default() -> Self {
        Self::new(0)
    }
}

/// A point in the stream tree. Cheap to copy; fork rather than reuse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    state: u64,
}

impl RngStream {
    /// Child stream for the given tag. Forking is a pure function of
    /// (state, tag), so sibling tasks can fork concurrently.
    #[must_use]
    pub fn fork(self, tag: u64) -> RngStream {
        RngStream {
            state: splitmix64(self.state.wrapping_add(splitmix64(tag ^ 0x9e37_79b9_7f4a_7c15))),
        }
    }

    /// Child configuration rooted at this stream, for nested components that
    /// take an [`RngConfig`] of their own.
    pub fn into_config(self) -> RngConfig {
        RngConfig::new(self.state)
    }

    /// Materialize the stream as a generator.
    pub fn rng(self) -> ChaCha12Rng {
        let mut s = self.state;
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            s = splitmix64(s);
            chunk.copy_from_slice(&s.to_le_bytes());
        }
        ChaCha12Rng::from_seed(seed)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Fixed tags so the same logical task always derives the same stream.
pub(crate) mod tags {
    pub const LAMBDA: u64 = 1;
    pub const ALPHA: u64 = 2;
    pub const PERM: u64 = 3;
    pub const REP: u64 = 4;
    pub const CANDIDATE: u64 = 5;
    pub const SIGMA: u64 = 6;
    pub const MODEL: u64 = 7;
    pub const ESTIMATE: u64 = 8;
    pub const BOOTSTRAP: u64 = 9;
}
