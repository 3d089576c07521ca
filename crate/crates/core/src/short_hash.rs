//! Short Hash Filters.
//!
//! An SHF is the exact window filter applied to fingerprints: a FIFO of the
//! last `w` fingerprints plus a fingerprint -> multiplicity map, giving
//! constant-time lookup and insert. A CSHF drops the map and scans a ring of
//! `w` fingerprints, trading time for half the memory. Neither can produce
//! a false negative.
//!
//! Fingerprint widths follow the memory budget: `M/(2w) - log2(w)/2` bits
//! for an SHF and `M/w` bits for a CSHF. The codomain has `floor(2^width)`
//! values, so fractional widths are realized rather than rounded down.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::counter_bits;
use crate::filter::{Decision, DuplicateFilter};
use crate::hash::{ElementHasher, FingerprintDomain, MixState};
use crate::stream::Element;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShortHashKind {
    Shf,
    Cshf,
}

/// Real-valued fingerprint width an SHF of `memory_bits` gets for `window`.
pub fn shf_fingerprint_width(memory_bits: u64, window: usize) -> f64 {
    let w = window as f64;
    memory_bits as f64 / (2.0 * w) - 0.5 * w.log2()
}

pub fn cshf_fingerprint_width(memory_bits: u64, window: usize) -> f64 {
    memory_bits as f64 / window as f64
}

fn domain_for(width: f64, memory_bits: u64, window: usize) -> Result<FingerprintDomain> {
    if window == 0 {
        return Err(Error::EmptyWindow);
    }
    if width < 1.0 || width.is_nan() {
        return Err(Error::InsufficientMemoryForWindow { memory_bits, window });
    }
    Ok(FingerprintDomain::from_width(width))
}

#[derive(Clone, Debug)]
pub struct ShfFilter {
    window: usize,
    domain: FingerprintDomain,
    hasher: ElementHasher,
    queue: VecDeque<u64>,
    counts: HashMap<u64, u32, MixState>,
}

impl ShfFilter {
    pub fn new(memory_bits: u64, window: usize, seed: u64) -> Result<Self> {
        let domain = domain_for(shf_fingerprint_width(memory_bits, window), memory_bits, window)?;
        Self::with_domain(window, domain, seed)
    }

    pub fn with_domain(window: usize, domain: FingerprintDomain, seed: u64) -> Result<Self> {
        if window == 0 {
            return Err(Error::EmptyWindow);
        }
        let cap = window.min(1 << 20);
        Ok(Self {
            window,
            domain,
            hasher: ElementHasher::new(seed),
            queue: VecDeque::with_capacity(cap),
            counts: HashMap::with_capacity_and_hasher(cap, MixState),
        })
    }

    #[inline]
    pub fn fingerprint(&self, element: Element) -> u64 {
        self.domain.reduce(self.hasher.hash(element))
    }

    pub fn domain(&self) -> FingerprintDomain {
        self.domain
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }

    /// Sum of all multiplicities in the map; equals `len()`.
    pub fn count_sum(&self) -> u64 {
        self.counts.values().map(|&c| u64::from(c)).sum()
    }
}

impl DuplicateFilter for ShfFilter {
    #[inline]
    fn lookup(&self, element: Element) -> Decision {
        Decision::from_duplicate(self.counts.contains_key(&self.fingerprint(element)))
    }

    fn insert(&mut self, element: Element) {
        let fp = self.fingerprint(element);
        self.queue.push_front(fp);
        *self.counts.entry(fp).or_insert(0) += 1;
        if self.queue.len() > self.window {
            let old = self.queue.pop_back().expect("non-empty");
            match self.counts.get_mut(&old) {
                Some(c) if *c > 1 => *c -= 1,
                _ => {
                    self.counts.remove(&old);
                }
            }
        }
    }

    /// `w` queued fingerprints plus up to `w` map entries (fingerprint and
    /// offset counter).
    fn memory_bits(&self) -> u64 {
        let w = self.window as f64;
        let h = self.domain.width();
        (w * h + w * (h + f64::from(counter_bits(self.window)))).ceil() as u64
    }
}

#[derive(Clone, Debug)]
pub struct CshfFilter {
    window: usize,
    domain: FingerprintDomain,
    hasher: ElementHasher,
    ring: Vec<u64>,
    head: usize,
}

impl CshfFilter {
    pub fn new(memory_bits: u64, window: usize, seed: u64) -> Result<Self> {
        let domain = domain_for(cshf_fingerprint_width(memory_bits, window), memory_bits, window)?;
        Self::with_domain(window, domain, seed)
    }

    pub fn with_domain(window: usize, domain: FingerprintDomain, seed: u64) -> Result<Self> {
        if window == 0 {
            return Err(Error::EmptyWindow);
        }
        Ok(Self {
            window,
            domain,
            hasher: ElementHasher::new(seed),
            ring: Vec::with_capacity(window.min(1 << 20)),
            head: 0,
        })
    }

    #[inline]
    pub fn fingerprint(&self, element: Element) -> u64 {
        self.domain.reduce(self.hasher.hash(element))
    }

    pub fn domain(&self) -> FingerprintDomain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }
}

impl DuplicateFilter for CshfFilter {
    /// Linear scan of the ring.
    fn lookup(&self, element: Element) -> Decision {
        let fp = self.fingerprint(element);
        // Branch-free inner loop so the scan vectorizes; exit per block.
        let hit = self
            .ring
            .chunks(256)
            .any(|block| block.iter().fold(false, |acc, &x| acc | (x == fp)));
        Decision::from_duplicate(hit)
    }

    fn insert(&mut self, element: Element) {
        let fp = self.fingerprint(element);
        if self.ring.len() < self.window {
            self.ring.push(fp);
        } else {
            self.ring[self.head] = fp;
            self.head = (self.head + 1) % self.window;
        }
    }

    fn memory_bits(&self) -> u64 {
        (self.window as f64 * self.domain.width()).ceil() as u64
    }
}

/// Closed-form false positive probability, possibly clamped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FpPrediction {
    pub probability: f64,
    /// Set when the SHF collision term `w 2^(-M/w)` exceeds 1 and the
    /// formula leaves `[0, 1]`.
    pub clamped: bool,
}

/// Stationary false positive probability of an SHF / CSHF with real-valued
/// fingerprint widths:
///
/// * SHF: `1 - (1 - sqrt(w 2^(-M/w)))^w`
/// * CSHF: `1 - (1 - 2^(-M/w))^w`
pub fn fp_theory(kind: ShortHashKind, memory_bits: f64, window: f64) -> FpPrediction {
    let ratio = memory_bits / window;
    let per_slot = match kind {
        ShortHashKind::Cshf => (-ratio).exp2(),
        ShortHashKind::Shf => (0.5 * (window.log2() - ratio)).exp2(),
    };
    if per_slot > 1.0 {
        return FpPrediction {
            probability: 1.0,
            clamped: true,
        };
    }
    FpPrediction {
        probability: one_minus_pow_complement(per_slot, window),
        clamped: false,
    }
}

/// `1 - (1 - q)^n` without cancellation.
pub(crate) fn one_minus_pow_complement(q: f64, n: f64) -> f64 {
    if q >= 1.0 {
        return if n > 0.0 { 1.0 } else { 0.0 };
    }
    -(n * (-q).ln_1p()).exp_m1()
}

/// Largest window before the filter's false positive probability reaches 1/2.
///
/// Returns the smallest integer `w` with `fp_theory(kind, M, w) >= 1/2`.
pub fn wmax_solve(kind: ShortHashKind, memory_bits: u64) -> usize {
    wmax_solve_target(kind, memory_bits, 0.5)
}

/// As [`wmax_solve`] with an arbitrary threshold in `(0, 1)`, by bisection
/// over `[1, M]` (the prediction increases with `w`).
pub fn wmax_solve_target(kind: ShortHashKind, memory_bits: u64, target: f64) -> usize {
    let m = memory_bits.max(1) as f64;
    let reaches = |w: usize| fp_theory(kind, m, w as f64).probability >= target;
    let (mut lo, mut hi) = (1usize, memory_bits.max(1) as usize);
    if reaches(lo) {
        return lo;
    }
    if !reaches(hi) {
        return hi;
    }
    // invariant: !reaches(lo) && reaches(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Least-squares line `w_max ~ slope * M + intercept` quoted for CSHFs.
pub const CSHF_WMAX_FIT: (f64, f64) = (0.0627, 443.0);
/// Least-squares line for SHFs.
pub const SHF_WMAX_FIT: (f64, f64) = (0.0233, 186.0);

pub fn wmax_fit(kind: ShortHashKind, memory_bits: u64) -> f64 {
    let (slope, intercept) = match kind {
        ShortHashKind::Cshf => CSHF_WMAX_FIT,
        ShortHashKind::Shf => SHF_WMAX_FIT,
    };
    slope * memory_bits as f64 + intercept
}
