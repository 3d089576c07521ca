//! Serializable description of how to build a filter.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::filter::BoxedFilter;
use crate::hash::derive_seed;
use crate::queuing::{sub_memory, QueuingFilter};
use crate::zoo::{self, FilterKind, FilterParams};

/// A filter kind with its parameters, optionally wrapped in a queue of
/// `levels` subfilters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterRecipe {
    pub kind: FilterKind,
    pub params: FilterParams,
    /// Number of queued subfilters `L`, or `None` for the bare filter.
    pub levels: Option<usize>,
}

impl FilterRecipe {
    pub fn bare(kind: FilterKind) -> Self {
        Self {
            kind,
            params: FilterParams::default(),
            levels: None,
        }
    }

    pub fn queued(kind: FilterKind, levels: usize) -> Self {
        Self {
            levels: Some(levels),
            ..Self::bare(kind)
        }
    }

    /// Two Bloom subfilters, each replaced after half a window.
    pub fn a2() -> Self {
        Self::queued(FilterKind::Bloom, 2)
    }

    pub fn with_params(mut self, params: FilterParams) -> Self {
        self.params = params;
        self
    }

    /// Builds the filter for window `w` and budget `M`.
    ///
    /// Queued filters use `c = floor(w / L)` and `floor(M / L)` bits per
    /// subfilter; subfilter `g` is seeded with `derive_seed(seed, g)`. Bare
    /// unwindowed kinds ignore `window`.
    pub fn build(&self, memory_bits: u64, window: usize, seed: u64) -> Result<BoxedFilter> {
        match self.levels {
            None => zoo::build(self.kind, memory_bits, window, &self.params, seed),
            Some(levels) => {
                let (capacity, sub) = self.queue_shape(memory_bits, window)?;
                self.build_queue(levels, capacity, sub, memory_bits, seed)
            }
        }
    }

    /// Builds a queue with an explicit capacity, for windows with `w != cL`.
    pub fn build_with_capacity(&self, memory_bits: u64, capacity: usize, seed: u64) -> Result<BoxedFilter> {
        let levels = self
            .levels
            .ok_or_else(|| invalid("levels", "capacity applies to queued filters only"))?;
        self.build_queue(levels, capacity, sub_memory(memory_bits, levels), memory_bits, seed)
    }

    /// `(c, floor(M / L))` for a queued recipe.
    pub fn queue_shape(&self, memory_bits: u64, window: usize) -> Result<(usize, u64)> {
        let levels = self.levels.ok_or_else(|| invalid("levels", "not a queued filter"))?;
        if levels == 0 {
            return Err(invalid("levels", "need at least one subfilter"));
        }
        let capacity = window / levels;
        if capacity == 0 {
            return Err(invalid(
                "levels",
                format!("{levels} subfilters exceed the window {window}"),
            ));
        }
        Ok((capacity, sub_memory(memory_bits, levels)))
    }

    fn build_queue(
        &self,
        levels: usize,
        capacity: usize,
        sub: u64,
        memory_bits: u64,
        seed: u64,
    ) -> Result<BoxedFilter> {
        let (kind, params) = (self.kind, self.params);
        // Fail early on budgets too small for a single subfilter.
        zoo::build(kind, sub, capacity, &params, seed)?;
        let queue = QueuingFilter::new(levels, capacity, memory_bits, move |g| {
            zoo::build(kind, sub, capacity, &params, derive_seed(seed, g)).expect("checked above")
        })?;
        Ok(Box::new(queue))
    }
}
