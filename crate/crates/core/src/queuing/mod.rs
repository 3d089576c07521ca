//! Sliding-window filters built from a queue of unwindowed subfilters,
//! with closed-form predictions of their error rates.

mod estimate;
mod filter;
mod optimize;
mod predict;

pub use estimate::{estimate_profile, ProfileEstimate};
pub use filter::{sub_memory, QueuingFilter};
pub use optimize::{optimize_levels, predict_levels, LevelPrediction};
pub use predict::{
    p_eta, predict_error_rate, predict_fn, predict_fnr, predict_fp, predict_fpr, u_eta, AlphabetSize,
    SubfilterErrorProfile,
};

use crate::filter::{Decision, DuplicateFilter};
use crate::metrics::ErrorStats;
use crate::stream::Element;

/// Scores a queue step by step, splitting the counts by the phase
/// `m mod c` at which each lookup happened (`m` = insertions so far).
/// Steps before `warmup` are not scored.
pub fn phase_stats<F: DuplicateFilter>(
    queue: &mut QueuingFilter<F>,
    stream: &[Element],
    truth: &[Decision],
    window: usize,
    warmup: usize,
) -> Vec<ErrorStats> {
    assert_eq!(stream.len(), truth.len(), "labels must cover the stream");
    let mut stats = vec![ErrorStats::new(window); queue.capacity()];
    for (i, (&e, &t)) in stream.iter().zip(truth).enumerate() {
        if i >= warmup {
            let answer = queue.lookup(e);
            stats[queue.counter()].record(t, answer);
        }
        queue.insert(e);
    }
    stats
}
