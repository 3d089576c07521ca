//! Closed-form error predictions for queued filters.
//!
//! A subfilter is summarized by `FP_eta` and `FN_eta`, its false positive
//! and false negative probabilities after `eta` insertions. For a queue of
//! `L` subfilters of capacity `c` covering the window `w = cL`, after
//! `m > w` insertions with `m mod c = j`:
//!
//! ```text
//! FP = 1 - (1 - FP_c)^(L-1) (1 - FP_j)
//! FN = u_c^(L-1) u_j
//! u_eta = p_eta FN_eta + (1 - p_eta)(1 - FP_eta)
//! p_eta = (1 - (1 - 1/|G|)^eta) / (1 - (1 - 1/|G|)^w)   (~ eta / w)
//! ```
//!
//! `p_eta` is the chance that a duplicate's earlier occurrence landed in a
//! given subfilter holding `eta` elements. Averaging over the phase `j`
//! gives the steady-state rates.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Size of the alphabet the stream draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphabetSize {
    /// `2^b` symbols.
    Bits(u32),
    /// Every element distinct unless repeated on purpose; `p_eta = eta/w`.
    Unbounded,
}

/// `FP_eta` and `FN_eta` for `eta = 0..=c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubfilterErrorProfile {
    fp: Vec<f64>,
    fn_: Vec<f64>,
}

impl SubfilterErrorProfile {
    pub fn new(fp: Vec<f64>, fn_: Vec<f64>) -> Result<Self> {
        if fp.is_empty() || fp.len() != fn_.len() {
            return Err(invalid("profile", "fp and fn tables must have the same nonzero length"));
        }
        if fp.iter().chain(&fn_).any(|p| !(0.0..=1.0).contains(p)) {
            return Err(invalid("profile", "entries must be probabilities"));
        }
        Ok(Self { fp, fn_ })
    }

    /// Profile of a subfilter whose error probabilities do not depend on
    /// its fill level.
    pub fn constant(capacity: usize, p_fp: f64, p_fn: f64) -> Result<Self> {
        Self::new(vec![p_fp; capacity + 1], vec![p_fn; capacity + 1])
    }

    /// Error-free subfilter.
    pub fn exact(capacity: usize) -> Self {
        Self {
            fp: vec![0.0; capacity + 1],
            fn_: vec![0.0; capacity + 1],
        }
    }

    pub fn from_fn(capacity: usize, mut f: impl FnMut(usize) -> (f64, f64)) -> Result<Self> {
        let (fp, fn_) = (0..=capacity).map(&mut f).unzip();
        Self::new(fp, fn_)
    }

    /// `c`, the largest tabulated insertion count.
    pub fn capacity(&self) -> usize {
        self.fp.len() - 1
    }

    pub fn fp(&self, eta: usize) -> f64 {
        self.fp[eta]
    }

    pub fn fn_(&self, eta: usize) -> f64 {
        self.fn_[eta]
    }

    pub fn fp_table(&self) -> &[f64] {
        &self.fp
    }

    pub fn fn_table(&self) -> &[f64] {
        &self.fn_
    }
}

/// Probability that a duplicate's previous occurrence lies among the `eta`
/// elements of one subfilter, given that it lies in the window `w`.
pub fn p_eta(eta: usize, window: usize, alphabet: AlphabetSize) -> f64 {
    match alphabet {
        AlphabetSize::Unbounded => eta as f64 / window as f64,
        AlphabetSize::Bits(b) => {
            let log_miss = (-(-f64::from(b)).exp2()).ln_1p();
            let hit = |k: usize| -(k as f64 * log_miss).exp_m1();
            let denom = hit(window);
            if denom == 0.0 {
                eta as f64 / window as f64
            } else {
                hit(eta) / denom
            }
        }
    }
}

/// Probability that one subfilter holding `eta` elements answers unseen for
/// a duplicate.
pub fn u_eta(profile: &SubfilterErrorProfile, eta: usize, window: usize, alphabet: AlphabetSize) -> f64 {
    let p = p_eta(eta, window, alphabet);
    p * profile.fn_(eta) + (1.0 - p) * (1.0 - profile.fp(eta))
}

fn check_phase(profile: &SubfilterErrorProfile, levels: usize, phase: usize) {
    assert!(levels >= 1, "need at least one subfilter");
    assert!(
        phase < profile.capacity().max(1),
        "phase {phase} outside 0..{}",
        profile.capacity()
    );
}

/// False positive probability at phase `m mod c`.
pub fn predict_fp(profile: &SubfilterErrorProfile, levels: usize, phase: usize) -> f64 {
    check_phase(profile, levels, phase);
    let c = profile.capacity();
    1.0 - (1.0 - profile.fp(c)).powi(levels as i32 - 1) * (1.0 - profile.fp(phase))
}

/// False negative probability at phase `m mod c`, for window `w`.
pub fn predict_fn(
    profile: &SubfilterErrorProfile,
    levels: usize,
    phase: usize,
    window: usize,
    alphabet: AlphabetSize,
) -> f64 {
    check_phase(profile, levels, phase);
    let c = profile.capacity();
    u_eta(profile, c, window, alphabet).powi(levels as i32 - 1) * u_eta(profile, phase, window, alphabet)
}

/// Steady-state false positive rate: [`predict_fp`] averaged over phases.
pub fn predict_fpr(profile: &SubfilterErrorProfile, levels: usize) -> f64 {
    assert!(levels >= 1, "need at least one subfilter");
    let c = profile.capacity();
    let mean: f64 = (0..c).map(|l| 1.0 - profile.fp(l)).sum::<f64>() / c as f64;
    1.0 - (1.0 - profile.fp(c)).powi(levels as i32 - 1) * mean
}

/// Steady-state false negative rate: [`predict_fn`] averaged over phases.
pub fn predict_fnr(profile: &SubfilterErrorProfile, levels: usize, window: usize, alphabet: AlphabetSize) -> f64 {
    assert!(levels >= 1, "need at least one subfilter");
    let c = profile.capacity();
    let mean: f64 = (0..c).map(|l| u_eta(profile, l, window, alphabet)).sum::<f64>() / c as f64;
    u_eta(profile, c, window, alphabet).powi(levels as i32 - 1) * mean
}

/// Predicted `FPR + FNR` for window `w = cL`.
pub fn predict_error_rate(profile: &SubfilterErrorProfile, levels: usize, alphabet: AlphabetSize) -> f64 {
    let window = profile.capacity() * levels;
    predict_fpr(profile, levels) + predict_fnr(profile, levels, window, alphabet)
}
