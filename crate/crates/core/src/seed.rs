//! Seed derivation.
//!
//! `derive_seed(master, i)` is the SplitMix64 output function applied to
//! `master + (i + 1)·0x9E3779B97F4A7C15 (mod 2⁶⁴)`. The finaliser is a
//! bijection on `u64` and the golden-ratio increment is odd, so for a fixed
//! master distinct indices give distinct seeds, and for a fixed index distinct
//! masters give distinct seeds. The function is part of the reproducibility
//! contract and must not change.
//!
//! Random generators are `ChaCha8Rng::seed_from_u64(seed)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix_finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, i: u64) -> u64 {
    splitmix_finalize(master.wrapping_add(i.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A master seed plus a counter handing out derived seeds in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedStream {
    pub master: u64,
    pub index: u64,
}

impl SeedStream {
    pub fn new(master: u64) -> Self {
        Self { master, index: 0 }
    }

    /// Seed for index `i`, independent of the counter.
    pub fn derive(&self, i: u64) -> u64 {
        derive_seed(self.master, i)
    }

    /// Sub-stream rooted at the seed for index `i`.
    pub fn fork(&self, i: u64) -> SeedStream {
        SeedStream::new(self.derive(i))
    }

    pub fn next_seed(&mut self) -> u64 {
        let s = self.derive(self.index);
        self.index += 1;
        s
    }

    pub fn next_rng(&mut self) -> ChaCha8Rng {
        rng_from_seed(self.next_seed())
    }
}
