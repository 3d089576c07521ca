//! Seeded 64-bit hashing shared by every filter.
//!
//! All element hashing goes through [`mix64`], the SplitMix64 output
//! function (Stafford's "variant 13"). It is a bijection on `u64` with full
//! avalanche, so keyed variants `mix64(mix64(e ^ k) + k)` behave as
//! independent functions for distinct keys `k`.

use std::hash::{BuildHasher, Hasher};
use std::num::NonZeroU64;

use serde::{Deserialize, Serialize};

/// 2^64 / golden ratio, the SplitMix64 increment.
pub const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
pub const fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed of child `index` from a master seed.
#[inline]
pub const fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Maps a 64-bit hash uniformly onto `0..range` (multiply-shift).
#[inline]
pub fn fast_range(hash: u64, range: u64) -> u64 {
    ((hash as u128 * range as u128) >> 64) as u64
}

/// Uniform draw in `[0, 1)` from the top 53 bits.
#[inline]
pub fn unit_interval(hash: u64) -> f64 {
    (hash >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A keyed element hash function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElementHasher {
    key: u64,
}

impl ElementHasher {
    pub const fn new(seed: u64) -> Self {
        Self {
            key: mix64(seed ^ GOLDEN_GAMMA),
        }
    }

    /// The `index`-th member of the family rooted at `seed`.
    pub const fn nth(seed: u64, index: u64) -> Self {
        Self::new(derive_seed(seed, index))
    }

    #[inline]
    pub fn hash(&self, element: u64) -> u64 {
        mix64(mix64(element ^ self.key).wrapping_add(self.key))
    }
}

/// Codomain of a fingerprint function.
///
/// `Bits(h)` keeps the low `h` bits of the hash. `Sized(k)` maps onto
/// `0..k` for arbitrary `k`, which realizes fractional widths `log2 k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FingerprintDomain {
    Bits(u32),
    Sized(NonZeroU64),
}

impl FingerprintDomain {
    /// Power-of-two codomain. `bits >= 64` means the full hash.
    pub fn bits(bits: u32) -> Self {
        FingerprintDomain::Bits(bits.clamp(1, 64))
    }

    /// Codomain of size `floor(2^width)`; widths of 64 or more use the full hash.
    pub fn from_width(width: f64) -> Self {
        if width >= 64.0 {
            return FingerprintDomain::Bits(64);
        }
        let size = width.exp2().floor().max(1.0) as u64;
        if size.is_power_of_two() {
            FingerprintDomain::Bits(size.trailing_zeros())
        } else {
            FingerprintDomain::Sized(NonZeroU64::new(size).expect("size >= 1"))
        }
    }

    /// Information content of one fingerprint, in bits.
    pub fn width(&self) -> f64 {
        match *self {
            FingerprintDomain::Bits(b) => b as f64,
            FingerprintDomain::Sized(k) => (k.get() as f64).log2(),
        }
    }

    /// Number of distinct fingerprints, as a float (2^64 for the full hash).
    pub fn size(&self) -> f64 {
        match *self {
            FingerprintDomain::Bits(b) => (b as f64).exp2(),
            FingerprintDomain::Sized(k) => k.get() as f64,
        }
    }

    #[inline]
    pub fn reduce(&self, hash: u64) -> u64 {
        match *self {
            FingerprintDomain::Bits(64) => hash,
            FingerprintDomain::Bits(b) => hash & ((1u64 << b) - 1),
            FingerprintDomain::Sized(k) => fast_range(hash, k.get()),
        }
    }
}

/// `BuildHasher` for integer-keyed maps: one [`mix64`] round per word.
#[derive(Clone, Copy, Debug, Default)]
pub struct MixState;

impl BuildHasher for MixState {
    type Hasher = MixHasher;

    fn build_hasher(&self) -> MixHasher {
        MixHasher(0)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct MixHasher(u64);

impl Hasher for MixHasher {
    fn write(&mut self, bytes: &[u8]) {
        for chunk in bytes.chunks(8) {
            let mut word = [0u8; 8];
            word[..chunk.len()].copy_from_slice(chunk);
            self.write_u64(u64::from_le_bytes(word));
        }
    }

    #[inline]
    fn write_u64(&mut self, x: u64) {
        self.0 = mix64(self.0.wrapping_add(GOLDEN_GAMMA) ^ x);
    }

    #[inline]
    fn finish(&self) -> u64 {
        self.0
    }
}
