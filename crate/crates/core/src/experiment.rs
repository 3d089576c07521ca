//! Running a filter against a labelled stream.
//!
//! Each element is first looked up, then scored against the exact window
//! oracle, then inserted; an element therefore never matches itself.

use crate::error::Result;
use crate::exact::ExactWindowFilter;
use crate::filter::{Decision, DuplicateFilter};
use crate::metrics::ErrorStats;
use crate::stream::{Element, StreamConfig};

/// Ground-truth labels: `Duplicate` iff the element occurs among the
/// previous `window` elements.
pub fn label_stream(stream: &[Element], window: usize) -> Result<Vec<Decision>> {
    let mut oracle = ExactWindowFilter::new(window.max(1), 1)?;
    Ok(stream.iter().map(|&e| oracle.step(e)).collect())
}

/// Lockstep run of `filter` and the exact oracle over a generated stream.
pub fn run_experiment<F>(filter: &mut F, cfg: &StreamConfig, window: usize) -> Result<ErrorStats>
where
    F: DuplicateFilter + ?Sized,
{
    let mut oracle = ExactWindowFilter::new(window, cfg.gamma_bits)?;
    let mut stats = ErrorStats::new(window);
    for e in cfg.iter()? {
        let answer = filter.lookup(e);
        let truth = oracle.lookup(e);
        stats.record(truth, answer);
        filter.insert(e);
        oracle.insert(e);
    }
    Ok(stats)
}

/// Replays `stream` through `filter`, calling `observe(step, truth, answer)`
/// before each insertion.
pub fn replay<F, O>(filter: &mut F, stream: &[Element], truth: &[Decision], mut observe: O)
where
    F: DuplicateFilter + ?Sized,
    O: FnMut(usize, Decision, Decision),
{
    assert_eq!(stream.len(), truth.len(), "labels must cover the stream");
    for (i, (&e, &t)) in stream.iter().zip(truth).enumerate() {
        let answer = filter.lookup(e);
        observe(i, t, answer);
        filter.insert(e);
    }
}

/// Scores every step at or after `warmup`.
pub fn score<F>(filter: &mut F, stream: &[Element], truth: &[Decision], window: usize, warmup: usize) -> ErrorStats
where
    F: DuplicateFilter + ?Sized,
{
    let mut stats = ErrorStats::new(window);
    replay(filter, stream, truth, |i, t, a| {
        if i >= warmup {
            stats.record(t, a);
        }
    });
    stats
}

/// Cumulative stats over the prefixes of length `checkpoints[k]`.
///
/// Checkpoints must be increasing; those beyond the stream are dropped.
pub fn score_checkpoints<F>(
    filter: &mut F,
    stream: &[Element],
    truth: &[Decision],
    window: usize,
    checkpoints: &[usize],
) -> Vec<ErrorStats>
where
    F: DuplicateFilter + ?Sized,
{
    debug_assert!(checkpoints.windows(2).all(|p| p[0] < p[1]));
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().copied().filter(|&c| c <= stream.len()).peekable();
    let mut stats = ErrorStats::new(window);
    while next.peek() == Some(&0) {
        out.push(stats);
        next.next();
    }
    replay(filter, stream, truth, |i, t, a| {
        stats.record(t, a);
        if next.peek() == Some(&(i + 1)) {
            out.push(stats);
            next.next();
        }
    });
    out
}
