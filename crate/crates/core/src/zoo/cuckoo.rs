//! Cuckoo filter with single-entry buckets.
//!
//! Each element has a fingerprint in `1..2^f` and two candidate buckets
//! `i1 = h(e) & mask` and `i2 = i1 ^ (g(fp) & mask)`; either can be
//! recomputed from the other and the fingerprint alone. When both are full
//! a random one is evicted and relocated, up to `max_kicks` times; the
//! fingerprint still displaced after that is dropped. Streams for the
//! duplicate detection problem overfill any table, so dropping is the
//! normal steady-state behavior rather than an error.
//!
//! A fingerprint already present in a candidate bucket is not stored again.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{invalid, Error, Result};
use crate::filter::{Decision, DuplicateFilter};
use crate::hash::{derive_seed, fast_range, mix64, ElementHasher};
use crate::stream::Element;

#[derive(Clone, Debug)]
pub struct CuckooFilter {
    buckets: Vec<u8>,
    mask: u64,
    fingerprint_bits: u32,
    max_kicks: u32,
    index_hash: ElementHasher,
    fp_hash: ElementHasher,
    alt_key: u64,
    rng: SplitMix64,
    dropped: u64,
}

impl CuckooFilter {
    pub const DEFAULT_FINGERPRINT_BITS: u32 = 3;
    pub const DEFAULT_MAX_KICKS: u32 = 500;

    /// Largest power-of-two bucket count with `buckets * f <= M`.
    pub fn new(memory_bits: u64, fingerprint_bits: u32, max_kicks: u32, seed: u64) -> Result<Self> {
        if !(1..=8).contains(&fingerprint_bits) {
            return Err(invalid("fingerprint_bits", "must lie in 1..=8"));
        }
        let fit = memory_bits / u64::from(fingerprint_bits);
        if fit == 0 {
            return Err(Error::InsufficientMemory {
                kind: "cuckoo",
                needed: u64::from(fingerprint_bits),
                memory_bits,
            });
        }
        let buckets = 1u64 << (63 - fit.leading_zeros());
        Ok(Self {
            buckets: vec![0; buckets as usize],
            mask: buckets - 1,
            fingerprint_bits,
            max_kicks,
            index_hash: ElementHasher::nth(seed, 0),
            fp_hash: ElementHasher::nth(seed, 1),
            alt_key: derive_seed(seed, 2),
            rng: SplitMix64::seed_from_u64(derive_seed(seed, 3)),
            dropped: 0,
        })
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    pub fn occupancy(&self) -> usize {
        self.buckets.iter().filter(|&&b| b != 0).count()
    }

    /// Fingerprints lost to failed relocations so far.
    pub fn dropped(&self) -> u64 {
        self.dropped
    }

    #[inline]
    pub fn fingerprint(&self, element: Element) -> u8 {
        let nonzero = (1u64 << self.fingerprint_bits) - 1;
        1 + fast_range(self.fp_hash.hash(element), nonzero) as u8
    }

    #[inline]
    pub fn primary_index(&self, element: Element) -> usize {
        (self.index_hash.hash(element) & self.mask) as usize
    }

    #[inline]
    pub fn alternate_index(&self, index: usize, fingerprint: u8) -> usize {
        index ^ (mix64(u64::from(fingerprint) ^ self.alt_key) & self.mask) as usize
    }

    #[inline]
    fn candidates(&self, element: Element) -> (u8, usize, usize) {
        let fp = self.fingerprint(element);
        let i1 = self.primary_index(element);
        (fp, i1, self.alternate_index(i1, fp))
    }
}

impl DuplicateFilter for CuckooFilter {
    #[inline]
    fn lookup(&self, element: Element) -> Decision {
        let (fp, i1, i2) = self.candidates(element);
        Decision::from_duplicate(self.buckets[i1] == fp || self.buckets[i2] == fp)
    }

    fn insert(&mut self, element: Element) {
        let (mut fp, i1, i2) = self.candidates(element);
        if self.buckets[i1] == fp || self.buckets[i2] == fp {
            return;
        }
        for i in [i1, i2] {
            if self.buckets[i] == 0 {
                self.buckets[i] = fp;
                return;
            }
        }
        let mut i = if self.rng.next_u64() & 1 == 0 { i1 } else { i2 };
        for _ in 0..self.max_kicks {
            std::mem::swap(&mut fp, &mut self.buckets[i]);
            i = self.alternate_index(i, fp);
            if self.buckets[i] == 0 {
                self.buckets[i] = fp;
                return;
            }
        }
        self.dropped += 1;
    }

    fn memory_bits(&self) -> u64 {
        self.buckets.len() as u64 * u64::from(self.fingerprint_bits)
    }
}
