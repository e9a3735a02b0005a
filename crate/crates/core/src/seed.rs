//! Deterministic seed derivation.
//!
//! Every stochastic component draws from its own ChaCha stream whose seed is a
//! hash of the master seed and a tag path, so adding a component never shifts
//! the stream of another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type Rng = ChaCha8Rng;

/// A single component of a seed-derivation path.
#[derive(Debug, Clone, Copy)]
pub enum SeedTag<'a> {
    Str(&'a str),
    U64(u64),
    Bytes(&'a [u8]),
}

impl<'a> From<&'a str> for SeedTag<'a> {
    fn from(s: &'a str) -> Self {
        SeedTag::Str(s)
    }
}

impl From<u64> for SeedTag<'_> {
    fn from(v: u64) -> Self {
        SeedTag::U64(v)
    }
}

impl From<usize> for SeedTag<'_> {
    fn from(v: usize) -> Self {
        SeedTag::U64(v as u64)
    }
}

impl<'a> From<&'a [u8]> for SeedTag<'a> {
    fn from(b: &'a [u8]) -> Self {
        SeedTag::Bytes(b)
    }
}

/// Hashes `master` together with `tags` into a new 64-bit seed.
pub fn derive_seed(master: u64, tags: &[SeedTag<'_>]) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    for tag in tags {
        // type byte + length prefix keeps ("ab","c") distinct from ("a","bc")
        match tag {
            SeedTag::Str(s) => {
                h.update([1u8]);
                h.update((s.len() as u64).to_le_bytes());
                h.update(s.as_bytes());
            }
            SeedTag::U64(v) => {
                h.update([2u8]);
                h.update(v.to_le_bytes());
            }
            SeedTag::Bytes(b) => {
                h.update([3u8]);
                h.update((b.len() as u64).to_le_bytes());
                h.update(b);
            }
        }
    }
    let out = h.finalize();
    let mut word = [0u8; 8];
    word.copy_from_slice(&out[..8]);
    u64::from_le_bytes(word)
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shorthand for `rng_from_seed(derive_seed(master, tags))`.
pub fn derived_rng(master: u64, tags: &[SeedTag<'_>]) -> Rng {
    rng_from_seed(derive_seed(master, tags))
}
