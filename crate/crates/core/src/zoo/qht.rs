//! Quotient-hash-table style filter: one fingerprint cell per row.

use crate::error::{Error, Result};
use crate::filter::{Decision, DuplicateFilter};
use crate::hash::{fast_range, ElementHasher};
use crate::stream::Element;

/// `rows = floor(M / s)` cells of `s`-bit fingerprints. Fingerprints are
/// drawn from `1..2^s`, 0 marks an empty cell. Insertion overwrites.
#[derive(Clone, Debug)]
pub struct QhtFilter {
    cells: Vec<u8>,
    fingerprint_bits: u32,
    row_hash: ElementHasher,
    fp_hash: ElementHasher,
}

impl QhtFilter {
    pub const DEFAULT_FINGERPRINT_BITS: u32 = 3;

    pub fn new(memory_bits: u64, fingerprint_bits: u32, seed: u64) -> Result<Self> {
        if !(1..=8).contains(&fingerprint_bits) {
            return Err(crate::error::invalid("fingerprint_bits", "must lie in 1..=8"));
        }
        let rows = memory_bits / u64::from(fingerprint_bits);
        if rows == 0 {
            return Err(Error::InsufficientMemory {
                kind: "qht",
                needed: u64::from(fingerprint_bits),
                memory_bits,
            });
        }
        Ok(Self {
            cells: vec![0; rows as usize],
            fingerprint_bits,
            row_hash: ElementHasher::nth(seed, 0),
            fp_hash: ElementHasher::nth(seed, 1),
        })
    }

    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    fn row(&self, element: Element) -> usize {
        fast_range(self.row_hash.hash(element), self.cells.len() as u64) as usize
    }

    #[inline]
    pub fn fingerprint(&self, element: Element) -> u8 {
        let nonzero = (1u64 << self.fingerprint_bits) - 1;
        1 + fast_range(self.fp_hash.hash(element), nonzero) as u8
    }

    pub fn occupied(&self) -> usize {
        self.cells.iter().filter(|&&c| c != 0).count()
    }
}

impl DuplicateFilter for QhtFilter {
    #[inline]
    fn lookup(&self, element: Element) -> Decision {
        Decision::from_duplicate(self.cells[self.row(element)] == self.fingerprint(element))
    }

    #[inline]
    fn insert(&mut self, element: Element) {
        let row = self.row(element);
        self.cells[row] = self.fingerprint(element);
    }

    fn memory_bits(&self) -> u64 {
        self.cells.len() as u64 * u64::from(self.fingerprint_bits)
    }
}
