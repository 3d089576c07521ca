use proptest::prelude::*;
use proptest::test_runner::FileFailurePersistence;
use slidedup::{exact_memory_bound, Decision, DuplicateFilter, ExactWindowFilter};

/// Membership by rescanning the trailing `w` elements.
fn naive(stream: &[u64], w: usize) -> Vec<Decision> {
    (0..stream.len())
        .map(|i| {
            let lo = i.saturating_sub(w);
            Decision::from_duplicate(stream[lo..i].contains(&stream[i]))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: Some(Box::new(FileFailurePersistence::WithSource("regressions"))),
        ..ProptestConfig::default()
    })]

    #[test]
    fn matches_naive_rescan(
        w in 1usize..=512,
        bits in 1u32..=10,
        raw in prop::collection::vec(any::<u64>(), 0..4000),
    ) {
        let stream: Vec<u64> = raw.iter().map(|x| x & ((1 << bits) - 1)).collect();
        let mut f = ExactWindowFilter::new(w, bits).unwrap();
        let got: Vec<Decision> = stream.iter().map(|&e| f.step(e)).collect();
        prop_assert_eq!(got, naive(&stream, w));
        prop_assert!(f.len() <= w);
    }

    #[test]
    fn memory_within_bound(w in 1usize..=1 << 16, b in 1u32..=62) {
        let f = ExactWindowFilter::new(w, b).unwrap();
        // The offset counters need ceil(log2 w) bits; the bound allows log2 w.
        let slack = w as f64 * ((w as f64).log2().ceil() - (w as f64).log2());
        prop_assert!(f.memory_bits() as f64 <= exact_memory_bound(w, b) + slack + 1e-6);
    }
}

#[test]
fn lookup_does_not_consume_state() {
    let mut a = ExactWindowFilter::new(16, 8).unwrap();
    let mut b = ExactWindowFilter::new(16, 8).unwrap();
    for e in 0..1000u64 {
        let e = (e * 2654435761) % 40;
        for probe in 0..40 {
            let _ = b.lookup(probe);
        }
        assert_eq!(a.step(e), b.step(e));
    }
}
