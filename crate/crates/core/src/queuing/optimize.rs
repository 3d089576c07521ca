use serde::{Deserialize, Serialize};

use super::filter::sub_memory;
use super::predict::{predict_fnr, predict_fpr, AlphabetSize, SubfilterErrorProfile};
use crate::error::{Error, Result};

/// Prediction for one candidate number of subfilters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelPrediction {
    pub levels: usize,
    pub capacity: usize,
    pub fpr: f64,
    pub fnr: f64,
}

impl LevelPrediction {
    pub fn error_rate(&self) -> f64 {
        self.fpr + self.fnr
    }
}

/// Predicted steady-state rates for each feasible `L` in `levels`.
///
/// For each `L` the capacity is `c = floor(w / L)` and the profile comes
/// from `profile_for(L, c, floor(M / L))`, which returns `None` when the
/// subfilter cannot be built with that budget. Predictions use the window
/// `cL` the queue actually covers.
pub fn predict_levels<P, I>(
    mut profile_for: P,
    memory_bits: u64,
    window: usize,
    alphabet: AlphabetSize,
    levels: I,
) -> Vec<LevelPrediction>
where
    P: FnMut(usize, usize, u64) -> Option<SubfilterErrorProfile>,
    I: IntoIterator<Item = usize>,
{
    levels
        .into_iter()
        .filter(|&l| l >= 1 && window / l >= 1)
        .filter_map(|l| {
            let capacity = window / l;
            let profile = profile_for(l, capacity, sub_memory(memory_bits, l))?;
            assert_eq!(profile.capacity(), capacity, "profile must cover c insertions");
            Some(LevelPrediction {
                levels: l,
                capacity,
                fpr: predict_fpr(&profile, l),
                fnr: predict_fnr(&profile, l, capacity * l, alphabet),
            })
        })
        .collect()
}

/// The feasible `L` minimizing predicted `FPR + FNR`; ties go to the
/// smaller `L`. Candidates are evaluated exhaustively.
pub fn optimize_levels<P, I>(
    profile_for: P,
    memory_bits: u64,
    window: usize,
    alphabet: AlphabetSize,
    levels: I,
) -> Result<LevelPrediction>
where
    P: FnMut(usize, usize, u64) -> Option<SubfilterErrorProfile>,
    I: IntoIterator<Item = usize>,
{
    let mut candidates = predict_levels(profile_for, memory_bits, window, alphabet, levels);
    candidates.sort_by_key(|c| c.levels);
    candidates
        .into_iter()
        .reduce(|best, c| if c.error_rate() < best.error_rate() { c } else { best })
        .ok_or(Error::EmptyFeasibleRange)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_subfilters_want_many_levels() {
        // lcm(1..=16): every L divides w, so cL = w throughout.
        let w = 720_720;
        let curve = predict_levels(
            |_, c, _| Some(SubfilterErrorProfile::exact(c)),
            1 << 20,
            w,
            AlphabetSize::Unbounded,
            1..=16,
        );
        assert!(curve.windows(2).all(|p| p[1].error_rate() < p[0].error_rate()));
        let best = optimize_levels(
            |_, c, _| Some(SubfilterErrorProfile::exact(c)),
            1 << 20,
            w,
            AlphabetSize::Unbounded,
            1..=16,
        )
        .unwrap();
        assert_eq!(best.levels, 16);
    }

    #[test]
    fn coin_flip_subfilters_want_one_level() {
        let best = optimize_levels(
            |_, c, _| SubfilterErrorProfile::constant(c, 0.5, 0.0).ok(),
            10_000,
            1000,
            AlphabetSize::Unbounded,
            1..=20,
        )
        .unwrap();
        assert_eq!(best.levels, 1);
    }

    #[test]
    fn ties_go_to_fewer_levels() {
        // No duplicates can be missed and nothing is ever a false positive.
        let best = optimize_levels(
            |_, c, _| SubfilterErrorProfile::constant(c, 0.0, 1.0).ok(),
            100,
            100,
            AlphabetSize::Unbounded,
            [1, 2, 4],
        );
        assert!(best.is_ok());
        let flat = optimize_levels(
            |_, c, _| SubfilterErrorProfile::constant(c, 1.0, 0.0).ok(),
            100,
            100,
            AlphabetSize::Unbounded,
            [4, 2, 1],
        )
        .unwrap();
        assert_eq!(flat.levels, 1);
    }

    #[test]
    fn infeasible_ranges() {
        let none = optimize_levels(|_, _, _| None, 100, 100, AlphabetSize::Unbounded, 1..=5);
        assert_eq!(none, Err(Error::EmptyFeasibleRange));
        // L > w leaves c = 0.
        let too_many = optimize_levels(
            |_, c, _| Some(SubfilterErrorProfile::exact(c)),
            100,
            3,
            AlphabetSize::Unbounded,
            4..=9,
        );
        assert_eq!(too_many, Err(Error::EmptyFeasibleRange));
    }

    #[test]
    fn sub_memory_is_passed_through() {
        let mut seen = Vec::new();
        predict_levels(
            |l, c, m| {
                seen.push((l, c, m));
                Some(SubfilterErrorProfile::exact(c))
            },
            1000,
            100,
            AlphabetSize::Unbounded,
            [1, 3, 7],
        );
        assert_eq!(seen, vec![(1, 100, 1000), (3, 33, 333), (7, 14, 142)]);
    }
}
