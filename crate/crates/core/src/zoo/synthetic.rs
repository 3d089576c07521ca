//! Subfilter with prescribed, fill-independent error probabilities.
//!
//! Membership is decided exactly on the subfilter's own insertion history,
//! then inverted by a coin: an absent element is reported as a duplicate
//! with probability `p_fp`, a present one as unseen with probability
//! `p_fn`. The coin is a hash of (seed, element, insertion count), so
//! lookups stay pure and a run is reproducible from its seed.

use crate::error::{invalid, Result};
use crate::exact::ExactWindowFilter;
use crate::filter::{Decision, DuplicateFilter};
use crate::hash::{mix64, unit_interval, ElementHasher};
use crate::stream::{Element, MAX_GAMMA_BITS};

#[derive(Clone, Debug)]
pub struct SyntheticSubfilter {
    memory: ExactWindowFilter,
    p_fp: f64,
    p_fn: f64,
    coin: ElementHasher,
    inserted: u64,
    nominal_bits: u64,
}

impl SyntheticSubfilter {
    /// `window` bounds the exact memory (use the subfilter capacity, or a
    /// stream length for unwindowed use). `nominal_bits` is what
    /// [`DuplicateFilter::memory_bits`] reports.
    pub fn new(window: usize, p_fp: f64, p_fn: f64, seed: u64, nominal_bits: u64) -> Result<Self> {
        for (name, p) in [("p_fp", p_fp), ("p_fn", p_fn)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(name, format!("{p} is not a probability")));
            }
        }
        Ok(Self {
            memory: ExactWindowFilter::new(window, MAX_GAMMA_BITS)?,
            p_fp,
            p_fn,
            coin: ElementHasher::nth(seed, 0),
            inserted: 0,
            nominal_bits,
        })
    }

    pub fn p_fp(&self) -> f64 {
        self.p_fp
    }

    pub fn p_fn(&self) -> f64 {
        self.p_fn
    }

    pub fn insertions(&self) -> u64 {
        self.inserted
    }

    pub fn holds(&self, element: Element) -> bool {
        self.memory.contains(element)
    }

    #[inline]
    fn coin(&self, element: Element) -> f64 {
        unit_interval(mix64(self.coin.hash(element) ^ mix64(self.inserted)))
    }
}

impl DuplicateFilter for SyntheticSubfilter {
    fn lookup(&self, element: Element) -> Decision {
        let u = self.coin(element);
        if self.memory.contains(element) {
            Decision::from_duplicate(u >= self.p_fn)
        } else {
            Decision::from_duplicate(u < self.p_fp)
        }
    }

    fn insert(&mut self, element: Element) {
        self.memory.insert(element);
        self.inserted += 1;
    }

    fn memory_bits(&self) -> u64 {
        self.nominal_bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactWindowFilter;
    use crate::stream::{StreamConfig, UniformStream};

    #[test]
    fn zero_coins_behave_exactly() {
        let mut s = SyntheticSubfilter::new(64, 0.0, 0.0, 3, 0).unwrap();
        let mut exact = ExactWindowFilter::new(64, 12).unwrap();
        for e in StreamConfig::new(3, 20_000, 8).iter().unwrap() {
            assert_eq!(s.step(e), exact.step(e));
        }
    }

    #[test]
    fn certain_false_positive() {
        let s = SyntheticSubfilter::new(10, 1.0, 0.0, 3, 0).unwrap();
        assert!((0..1000).all(|e| s.lookup(e).is_duplicate()));
    }

    #[test]
    fn certain_false_negative() {
        let mut s = SyntheticSubfilter::new(10, 0.0, 1.0, 3, 0).unwrap();
        s.insert(5);
        assert!(!s.lookup(5).is_duplicate());
    }

    #[test]
    fn fp_coin_frequency() {
        let mut s = SyntheticSubfilter::new(1000, 0.1, 0.0, 9, 0).unwrap();
        for e in 0..500 {
            s.insert(e);
        }
        let n = 100_000u64;
        let hits = UniformStream::new(4, 62, n as usize)
            .unwrap()
            .filter(|&e| s.lookup(e).is_duplicate())
            .count() as f64;
        let p = hits / n as f64;
        let sigma = (0.1f64 * 0.9 / n as f64).sqrt();
        assert!((p - 0.1).abs() < 3.0 * sigma, "{p}");
    }

    #[test]
    fn fn_coin_frequency() {
        let n = 20_000usize;
        let mut s = SyntheticSubfilter::new(n, 0.0, 0.3, 1, 0).unwrap();
        let elems: Vec<_> = UniformStream::new(5, 62, n).unwrap().collect();
        for &e in &elems {
            s.insert(e);
        }
        let p = elems.iter().filter(|&&e| !s.lookup(e).is_duplicate()).count() as f64 / n as f64;
        let sigma = (0.3f64 * 0.7 / n as f64).sqrt();
        assert!((p - 0.3).abs() < 3.0 * sigma, "{p}");
    }

    #[test]
    fn rejects_bad_probabilities() {
        assert!(SyntheticSubfilter::new(1, 1.5, 0.0, 0, 0).is_err());
        assert!(SyntheticSubfilter::new(1, 0.0, -0.1, 0, 0).is_err());
    }
}
