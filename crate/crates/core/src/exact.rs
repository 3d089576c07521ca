//! Zero-error sliding-window filter.
//!
//! Keeps the last `w` elements in a FIFO together with a multiplicity map,
//! so both lookup and insert run in amortized constant time. The same type
//! labels ground truth for every experiment in this crate.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::filter::{Decision, DuplicateFilter};
use crate::hash::MixState;
use crate::stream::Element;

#[derive(Clone, Debug)]
pub struct ExactWindowFilter {
    window: usize,
    gamma_bits: u32,
    queue: VecDeque<Element>,
    counts: HashMap<Element, u32, MixState>,
}

impl ExactWindowFilter {
    /// `gamma_bits` only enters memory accounting.
    pub fn new(window: usize, gamma_bits: u32) -> Result<Self> {
        if window == 0 {
            return Err(Error::EmptyWindow);
        }
        if gamma_bits == 0 {
            return Err(Error::EmptyAlphabet);
        }
        // Preallocate up to a bound so unbounded windows stay cheap.
        let cap = window.min(1 << 20);
        Ok(Self {
            window,
            gamma_bits,
            queue: VecDeque::with_capacity(cap),
            counts: HashMap::with_capacity_and_hasher(cap, MixState),
        })
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

    pub fn multiplicity(&self, element: Element) -> u32 {
        self.counts.get(&element).copied().unwrap_or(0)
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    #[inline]
    pub fn contains(&self, element: Element) -> bool {
        self.counts.contains_key(&element)
    }

    pub fn clear(&mut self) {
        self.queue.clear();
        self.counts.clear();
    }

    #[cfg(test)]
    pub(crate) fn check_invariants(&self) {
        assert!(self.queue.len() <= self.window);
        let mut recount: HashMap<Element, u32> = HashMap::new();
        for &e in &self.queue {
            *recount.entry(e).or_default() += 1;
        }
        assert_eq!(recount.len(), self.counts.len());
        for (e, c) in recount {
            assert_eq!(self.counts.get(&e), Some(&c));
        }
    }
}

impl DuplicateFilter for ExactWindowFilter {
    #[inline]
    fn lookup(&self, element: Element) -> Decision {
        Decision::from_duplicate(self.contains(element))
    }

    fn insert(&mut self, element: Element) {
        if self.queue.len() == self.window {
            let oldest = self.queue.pop_front().expect("window >= 1");
            match self.counts.get_mut(&oldest) {
                Some(c) if *c > 1 => *c -= 1,
                _ => {
                    self.counts.remove(&oldest);
                }
            }
        }
        self.queue.push_back(element);
        *self.counts.entry(element).or_insert(0) += 1;
    }

    /// Queue of `w` elements plus up to `w` keys with offset counters.
    fn memory_bits(&self) -> u64 {
        let w = self.window as u64;
        let b = u64::from(self.gamma_bits);
        w.saturating_mul(2 * b + u64::from(counter_bits(self.window)))
    }
}

/// Bits for a multiplicity in `1..=w`, stored as `count - 1` (absent keys
/// carry no counter).
pub fn counter_bits(window: usize) -> u32 {
    match window {
        0 | 1 => 0,
        w => usize::BITS - (w - 1).leading_zeros(),
    }
}

/// Memory sufficient for exact detection: `w (log2 w + 2b)` bits.
pub fn exact_memory_bound(window: usize, gamma_bits: u32) -> f64 {
    let w = window as f64;
    w * (w.log2() + 2.0 * f64::from(gamma_bits))
}
