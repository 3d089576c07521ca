//! Stable Bloom filter.
//!
//! `m = floor(M / d)` cells of `d` bits. Each insertion first decrements
//! `P` cells drawn uniformly with replacement (saturating at zero), then
//! sets the element's `K` cells to `2^d - 1`. Lookup reports a duplicate
//! iff all `K` cells are nonzero.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{invalid, Error, Result};
use crate::exec::{self, Execution};
use crate::filter::{Decision, DuplicateFilter};
use crate::hash::{derive_seed, fast_range, ElementHasher};
use crate::stream::{Element, UniformStream};

/// Decrement count giving a stationary false positive rate near 2% for
/// 2-bit cells and two hash functions (see [`calibrate_decrements`]).
pub const DEFAULT_DECREMENTS: u32 = 38;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SbfConfig {
    /// `d`
    pub cell_bits: u32,
    /// `K`
    pub hashes: u32,
    /// `P`
    pub decrements: u32,
}

impl Default for SbfConfig {
    fn default() -> Self {
        Self {
            cell_bits: 2,
            hashes: 2,
            decrements: DEFAULT_DECREMENTS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StableBloomFilter {
    cells: Vec<u8>,
    cell_bits: u32,
    decrements: u32,
    hashers: Vec<ElementHasher>,
    rng: SplitMix64,
}

impl StableBloomFilter {
    pub fn new(memory_bits: u64, config: SbfConfig, seed: u64) -> Result<Self> {
        let SbfConfig {
            cell_bits,
            hashes,
            decrements,
        } = config;
        if !(1..=8).contains(&cell_bits) {
            return Err(invalid("cell_bits", "must lie in 1..=8"));
        }
        if hashes == 0 {
            return Err(invalid("hashes", "need at least one hash function"));
        }
        let cells = memory_bits / u64::from(cell_bits);
        if cells == 0 {
            return Err(Error::InsufficientMemory {
                kind: "sbf",
                needed: u64::from(cell_bits),
                memory_bits,
            });
        }
        Ok(Self {
            cells: vec![0; cells as usize],
            cell_bits,
            decrements,
            hashers: (0..u64::from(hashes)).map(|k| ElementHasher::nth(seed, k)).collect(),
            rng: SplitMix64::seed_from_u64(derive_seed(seed, u64::MAX)),
        })
    }

    pub fn with_defaults(memory_bits: u64, seed: u64) -> Result<Self> {
        Self::new(memory_bits, SbfConfig::default(), seed)
    }

    pub fn cells(&self) -> usize {
        self.cells.len()
    }

    pub fn decrements(&self) -> u32 {
        self.decrements
    }

    pub fn cell(&self, index: usize) -> u8 {
        self.cells[index]
    }

    #[inline]
    pub fn cell_index(&self, k: usize, element: Element) -> usize {
        fast_range(self.hashers[k].hash(element), self.cells.len() as u64) as usize
    }

    fn max_value(&self) -> u8 {
        ((1u16 << self.cell_bits) - 1) as u8
    }
}

impl DuplicateFilter for StableBloomFilter {
    #[inline]
    fn lookup(&self, element: Element) -> Decision {
        Decision::from_duplicate((0..self.hashers.len()).all(|k| self.cells[self.cell_index(k, element)] != 0))
    }

    fn insert(&mut self, element: Element) {
        let m = self.cells.len() as u64;
        for _ in 0..self.decrements {
            let i = fast_range(self.rng.next_u64(), m) as usize;
            self.cells[i] = self.cells[i].saturating_sub(1);
        }
        let max = self.max_value();
        for k in 0..self.hashers.len() {
            let i = self.cell_index(k, element);
            self.cells[i] = max;
        }
    }

    fn memory_bits(&self) -> u64 {
        self.cells.len() as u64 * u64::from(self.cell_bits)
    }
}

/// Stationary false positive rate of an SBF on a stream without repeats,
/// measured after a burn-in and averaged over `trials` seeds.
pub fn stationary_fpr(
    memory_bits: u64,
    config: SbfConfig,
    steps: usize,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<f64> {
    let rates = exec::map_range(exec, trials, |t| -> Result<f64> {
        let s = derive_seed(seed, t as u64);
        let mut f = StableBloomFilter::new(memory_bits, config, s)?;
        // Elements from a 62-bit alphabet: repeats are negligible.
        let stream = UniformStream::unbounded(derive_seed(s, 1), 62)?;
        let burn_in = steps;
        let mut fp = 0usize;
        for (i, e) in stream.take(burn_in + steps).enumerate() {
            let d = f.step(e);
            if i >= burn_in && d.is_duplicate() {
                fp += 1;
            }
        }
        Ok(fp as f64 / steps as f64)
    });
    let rates = rates.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(rates.iter().sum::<f64>() / rates.len().max(1) as f64)
}

/// Smallest decrement count whose simulated stationary false positive rate
/// is at most `target`, by bisection over `1..=max_decrements` (the rate
/// falls as `P` grows).
pub fn calibrate_decrements(
    memory_bits: u64,
    cell_bits: u32,
    hashes: u32,
    target: f64,
    max_decrements: u32,
    seed: u64,
    exec: Execution,
) -> Result<u32> {
    if !(0.0..1.0).contains(&target) {
        return Err(invalid("target", "must lie in [0, 1)"));
    }
    let cells = (memory_bits / u64::from(cell_bits.max(1))).max(1) as usize;
    let steps = (4 * cells).clamp(20_000, 200_000);
    let rate = |decrements: u32| {
        let config = SbfConfig {
            cell_bits,
            hashes,
            decrements,
        };
        stationary_fpr(memory_bits, config, steps, 4, seed, exec)
    };
    let (mut lo, mut hi) = (0u32, max_decrements.max(1));
    if rate(hi)? > target {
        return Ok(hi);
    }
    // invariant: rate(lo) > target >= rate(hi), with rate(0) = 1 once full.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if rate(mid)? <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Stationary false positive probability from the mean-field cell model:
/// each cell is zero with probability `(1 + 1/(P (1/K - 1/m)))^-max`.
pub fn stationary_fpr_model(cells: u64, cell_bits: u32, hashes: u32, decrements: u32) -> f64 {
    let max = f64::from((1u32 << cell_bits) - 1);
    let rate = f64::from(decrements) * (1.0 / f64::from(hashes) - 1.0 / cells as f64);
    if rate <= 0.0 {
        return 1.0;
    }
    let zero = (1.0 + 1.0 / rate).powf(-max);
    (1.0 - zero).powi(hashes as i32)
}
