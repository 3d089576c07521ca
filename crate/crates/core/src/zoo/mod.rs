//! Filter kinds beyond the exact and short-hash filters, and a uniform
//! constructor over all of them.

mod bloom;
mod cuckoo;
mod qht;
mod sbf;
mod synthetic;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use bloom::BloomFilter;
pub use cuckoo::CuckooFilter;
pub use qht::QhtFilter;
pub use sbf::{
    calibrate_decrements, stationary_fpr, stationary_fpr_model, SbfConfig, StableBloomFilter, DEFAULT_DECREMENTS,
};
pub use synthetic::SyntheticSubfilter;

use crate::error::{Error, Result};
use crate::exact::ExactWindowFilter;
use crate::filter::BoxedFilter;
use crate::short_hash::{CshfFilter, ShfFilter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    Exact,
    Shf,
    Cshf,
    Qht,
    Sbf,
    Cuckoo,
    Bloom,
    Synthetic,
}

impl FilterKind {
    pub const ALL: [FilterKind; 8] = [
        FilterKind::Exact,
        FilterKind::Shf,
        FilterKind::Cshf,
        FilterKind::Qht,
        FilterKind::Sbf,
        FilterKind::Cuckoo,
        FilterKind::Bloom,
        FilterKind::Synthetic,
    ];

    /// Kinds without a notion of window, built by [`zoo_make`].
    pub const ZOO: [FilterKind; 5] = [
        FilterKind::Qht,
        FilterKind::Sbf,
        FilterKind::Cuckoo,
        FilterKind::Bloom,
        FilterKind::Synthetic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FilterKind::Exact => "exact",
            FilterKind::Shf => "shf",
            FilterKind::Cshf => "cshf",
            FilterKind::Qht => "qht",
            FilterKind::Sbf => "sbf",
            FilterKind::Cuckoo => "cuckoo",
            FilterKind::Bloom => "bloom",
            FilterKind::Synthetic => "synthetic",
        }
    }

    /// Whether the state size is fixed by the memory budget. The exact and
    /// synthetic filters store whole elements and grow with their window.
    pub fn is_bounded_memory(self) -> bool {
        !matches!(self, FilterKind::Exact | FilterKind::Synthetic)
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let kind = match lower.as_str() {
            "qht-style" | "qhtstyle" => FilterKind::Qht,
            "stable-bloom" => FilterKind::Sbf,
            other => match FilterKind::ALL.into_iter().find(|k| k.name() == other) {
                Some(k) => k,
                None => return Err(Error::UnknownKind(s.to_string())),
            },
        };
        Ok(kind)
    }
}

/// Per-kind tuning knobs; fields not used by a kind are ignored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterParams {
    pub qht_fingerprint_bits: u32,
    pub sbf: SbfConfig,
    pub cuckoo_fingerprint_bits: u32,
    pub cuckoo_max_kicks: u32,
    pub bloom_hashes: u32,
    pub synthetic_fp: f64,
    pub synthetic_fn: f64,
    /// Element width, for the exact filter's memory accounting.
    pub gamma_bits: u32,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self {
            qht_fingerprint_bits: QhtFilter::DEFAULT_FINGERPRINT_BITS,
            sbf: SbfConfig::default(),
            cuckoo_fingerprint_bits: CuckooFilter::DEFAULT_FINGERPRINT_BITS,
            cuckoo_max_kicks: CuckooFilter::DEFAULT_MAX_KICKS,
            bloom_hashes: BloomFilter::DEFAULT_HASHES,
            synthetic_fp: 0.0,
            synthetic_fn: 0.0,
            gamma_bits: crate::stream::MAX_GAMMA_BITS,
        }
    }
}

impl FilterParams {
    pub fn synthetic(p_fp: f64, p_fn: f64) -> Self {
        Self {
            synthetic_fp: p_fp,
            synthetic_fn: p_fn,
            ..Self::default()
        }
    }
}

/// Builds a filter of any kind.
///
/// `window` is the number of trailing insertions the filter must cover:
/// it sizes the exact, SHF, CSHF and synthetic filters and is ignored by
/// the others.
pub fn build(
    kind: FilterKind,
    memory_bits: u64,
    window: usize,
    params: &FilterParams,
    seed: u64,
) -> Result<BoxedFilter> {
    Ok(match kind {
        FilterKind::Exact => Box::new(ExactWindowFilter::new(window, params.gamma_bits)?),
        FilterKind::Shf => Box::new(ShfFilter::new(memory_bits, window, seed)?),
        FilterKind::Cshf => Box::new(CshfFilter::new(memory_bits, window, seed)?),
        FilterKind::Qht => Box::new(QhtFilter::new(memory_bits, params.qht_fingerprint_bits, seed)?),
        FilterKind::Sbf => Box::new(StableBloomFilter::new(memory_bits, params.sbf, seed)?),
        FilterKind::Cuckoo => Box::new(CuckooFilter::new(
            memory_bits,
            params.cuckoo_fingerprint_bits,
            params.cuckoo_max_kicks,
            seed,
        )?),
        FilterKind::Bloom => Box::new(BloomFilter::new(memory_bits, params.bloom_hashes, seed)?),
        FilterKind::Synthetic => Box::new(SyntheticSubfilter::new(
            window,
            params.synthetic_fp,
            params.synthetic_fn,
            seed,
            memory_bits,
        )?),
    })
}

/// Builds a filter for the unwindowed problem. The synthetic filter keeps
/// its whole insertion history.
pub fn zoo_make(kind: FilterKind, memory_bits: u64, params: &FilterParams, seed: u64) -> Result<BoxedFilter> {
    match kind {
        FilterKind::Exact | FilterKind::Shf | FilterKind::Cshf => Err(crate::error::invalid(
            "kind",
            format!("`{kind}` is a sliding-window filter; use `build` with a window"),
        )),
        _ => build(kind, memory_bits, usize::MAX, params, seed),
    }
}
