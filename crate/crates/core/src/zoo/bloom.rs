//! Plain Bloom filter (no deletion).

use crate::error::{Error, Result};
use crate::filter::{Decision, DuplicateFilter};
use crate::hash::{fast_range, ElementHasher};
use crate::stream::Element;

#[derive(Clone, Debug)]
pub struct BloomFilter {
    words: Vec<u64>,
    bits: u64,
    hashers: Vec<ElementHasher>,
}

impl BloomFilter {
    pub const DEFAULT_HASHES: u32 = 4;

    /// `M` one-bit cells and `hashes` independent index functions.
    pub fn new(memory_bits: u64, hashes: u32, seed: u64) -> Result<Self> {
        if memory_bits == 0 {
            return Err(Error::InsufficientMemory {
                kind: "bloom",
                needed: 1,
                memory_bits,
            });
        }
        if hashes == 0 {
            return Err(crate::error::invalid("hashes", "need at least one hash function"));
        }
        Ok(Self {
            words: vec![0; memory_bits.div_ceil(64) as usize],
            bits: memory_bits,
            hashers: (0..u64::from(hashes)).map(|k| ElementHasher::nth(seed, k)).collect(),
        })
    }

    #[inline]
    fn index(&self, k: usize, element: Element) -> u64 {
        fast_range(self.hashers[k].hash(element), self.bits)
    }

    #[inline]
    fn get(&self, i: u64) -> bool {
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    pub fn ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }
}

impl DuplicateFilter for BloomFilter {
    #[inline]
    fn lookup(&self, element: Element) -> Decision {
        Decision::from_duplicate((0..self.hashers.len()).all(|k| self.get(self.index(k, element))))
    }

    fn insert(&mut self, element: Element) {
        for k in 0..self.hashers.len() {
            let i = self.index(k, element);
            self.words[(i / 64) as usize] |= 1 << (i % 64);
        }
    }

    fn memory_bits(&self) -> u64 {
        self.bits
    }
}
