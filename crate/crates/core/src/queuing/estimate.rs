use std::collections::HashSet;

use super::predict::SubfilterErrorProfile;
use crate::error::Result;
use crate::exec::{self, Execution};
use crate::filter::DuplicateFilter;
use crate::hash::{derive_seed, fast_range, MixState};
use crate::stream::{check_gamma_bits, UniformStream};

/// Settings for [`estimate_profile`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileEstimate {
    /// Largest insertion count `c` to tabulate.
    pub capacity: usize,
    pub gamma_bits: u32,
    pub trials: usize,
    /// Insertion counts are pooled in blocks of this many (`eta = 0` stays
    /// on its own).
    pub bucket: usize,
    pub seed: u64,
}

/// Measures `FP_eta` and `FN_eta` of a bare subfilter.
///
/// Each trial builds a fresh filter with `make(seed)` and inserts `c`
/// uniform elements. Before the `eta`-th insertion it queries one element
/// absent from the inserted set (a false positive if answered duplicate)
/// and one element drawn uniformly from the `eta` inserted so far (a false
/// negative if answered unseen). Lookups do not change filter state, so the
/// probes do not disturb the trial.
pub fn estimate_profile<F, G>(make: G, settings: ProfileEstimate, exec: Execution) -> Result<SubfilterErrorProfile>
where
    F: DuplicateFilter,
    G: Fn(u64) -> Result<F> + Sync + Send,
{
    let ProfileEstimate {
        capacity: c,
        gamma_bits,
        trials,
        bucket,
        seed,
    } = settings;
    check_gamma_bits(gamma_bits)?;
    // Rejection sampling of absent probes needs room left in the alphabet.
    if (c as f64) >= 0.5 * (gamma_bits as f64).exp2() {
        return Err(crate::error::invalid(
            "capacity",
            "must be below half the alphabet size",
        ));
    }
    let chunk = 8usize;
    let chunks = trials.div_ceil(chunk);
    let partial = exec::map_range(exec, chunks, |k| -> Result<(Vec<u64>, Vec<u64>)> {
        let mut fp = vec![0u64; c + 1];
        let mut fnc = vec![0u64; c + 1];
        for t in k * chunk..((k + 1) * chunk).min(trials) {
            let s = derive_seed(seed, t as u64);
            let mut filter = make(derive_seed(s, 0))?;
            let mut inserts = UniformStream::unbounded(derive_seed(s, 1), gamma_bits)?;
            let mut probes = UniformStream::unbounded(derive_seed(s, 2), 62)?;
            let mut absent = UniformStream::unbounded(derive_seed(s, 3), gamma_bits)?;
            let mut inserted = Vec::with_capacity(c);
            let mut members: HashSet<u64, MixState> = HashSet::with_capacity_and_hasher(c, MixState);
            for eta in 0..=c {
                let probe = absent
                    .by_ref()
                    .find(|e| !members.contains(e))
                    .expect("unbounded stream");
                if filter.lookup(probe).is_duplicate() {
                    fp[eta] += 1;
                }
                if eta > 0 {
                    let pick = fast_range(probes.next().expect("unbounded"), eta as u64) as usize;
                    if !filter.lookup(inserted[pick]).is_duplicate() {
                        fnc[eta] += 1;
                    }
                }
                if eta < c {
                    let e = inserts.next().expect("unbounded stream");
                    filter.insert(e);
                    inserted.push(e);
                    members.insert(e);
                }
            }
        }
        Ok((fp, fnc))
    });
    let mut fp = vec![0u64; c + 1];
    let mut fnc = vec![0u64; c + 1];
    for part in partial {
        let (a, b) = part?;
        for eta in 0..=c {
            fp[eta] += a[eta];
            fnc[eta] += b[eta];
        }
    }
    let n = trials.max(1) as f64;
    let fp = pool(&fp, bucket, n);
    let mut fn_ = pool(&fnc, bucket, n);
    fn_[0] = 0.0;
    SubfilterErrorProfile::new(fp, fn_)
}

/// Block means of `counts / trials`, blocks `{0}, {1..=k}, {k+1..=2k}, ...`.
fn pool(counts: &[u64], bucket: usize, trials: f64) -> Vec<f64> {
    let k = bucket.max(1);
    let mut out = vec![0.0; counts.len()];
    out[0] = counts[0] as f64 / trials;
    let mut start = 1;
    while start < counts.len() {
        let end = (start + k).min(counts.len());
        let mean = counts[start..end].iter().sum::<u64>() as f64 / (trials * (end - start) as f64);
        out[start..end].fill(mean);
        start = end;
    }
    out
}
