//! Queued synthetic subfilters against the closed-form predictions.

use slidedup::experiment::label_stream;
use slidedup::metrics::binomial_sigma;
use slidedup::queuing::{phase_stats, predict_fn, predict_fnr, predict_fp, predict_fpr, AlphabetSize};
use slidedup::zoo::SyntheticSubfilter;
use slidedup::{gen_stream, ErrorStats, QueuingFilter, StreamConfig, SubfilterErrorProfile};

fn run(levels: usize, c: usize, p_fp: f64, p_fn: f64, b: u32, n: usize, seed: u64) -> Vec<ErrorStats> {
    let w = levels * c;
    let stream = gen_stream(&StreamConfig::new(seed, n, b)).unwrap();
    let truth = label_stream(&stream, w).unwrap();
    let mut q = QueuingFilter::new(levels, c, 0, move |g| {
        SyntheticSubfilter::new(c, p_fp, p_fn, slidedup::hash::derive_seed(seed, g), 0).unwrap()
    })
    .unwrap();
    phase_stats(&mut q, &stream, &truth, w, w)
}

#[test]
fn false_positives_match_per_phase_and_overall() {
    let (levels, c) = (3, 50);
    let phases = run(levels, c, 0.05, 0.02, 40, 300_000, 1);
    let profile = SubfilterErrorProfile::constant(c, 0.05, 0.02).unwrap();
    let mut total = ErrorStats::new(levels * c);
    for (j, s) in phases.iter().enumerate() {
        let p = predict_fp(&profile, levels, j);
        assert!((s.fpr() - p).abs() < 4.0 * binomial_sigma(p, s.n_unseen), "phase {j}");
        total += *s;
    }
    let p = predict_fpr(&profile, levels);
    assert!((total.fpr() - p).abs() < 3.0 * binomial_sigma(p, total.n_unseen));
}

#[test]
fn false_negative_formula_is_conservative() {
    // A 2^9 alphabet against a window of 200 makes a third of the steps
    // duplicates, so false negatives are plentiful.
    let (levels, c, b) = (4, 50, 9);
    let phases = run(levels, c, 0.05, 0.02, b, 400_000, 2);
    let profile = SubfilterErrorProfile::constant(c, 0.05, 0.02).unwrap();
    let mut total = ErrorStats::new(levels * c);
    for s in &phases {
        total += *s;
    }
    // The formula multiplies per-subfilter miss probabilities as if the
    // events "earlier occurrence lies in subfilter i" were independent. An
    // occurrence lies in exactly one slice, so the product overstates how
    // often every subfilter misses.
    let predicted = predict_fnr(&profile, levels, levels * c, AlphabetSize::Bits(b));
    assert!(total.fnr() < predicted, "{} vs {predicted}", total.fnr());
    assert!(total.fnr() > 0.02);
    let at_zero = predict_fn(&profile, levels, 0, levels * c, AlphabetSize::Bits(b));
    let at_end = predict_fn(&profile, levels, c - 1, levels * c, AlphabetSize::Bits(b));
    assert!(at_zero > at_end);
    assert!(phases[0].fnr() > phases[c - 1].fnr());
}
