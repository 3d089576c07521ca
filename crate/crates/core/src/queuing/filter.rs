use std::collections::VecDeque;
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::filter::{Decision, DuplicateFilter};
use crate::stream::Element;

type Factory<F> = Box<dyn FnMut(u64) -> F + Send>;

/// FIFO of `L` subfilters, each receiving `c` consecutive insertions.
///
/// Insertions go to the front subfilter. After every `c`-th insertion the
/// back subfilter is dropped and a fresh one, built by the factory, is
/// pushed at the front; the insertion counter then restarts at zero. The
/// queue thus remembers between `c(L-1)` and `cL` trailing insertions.
///
/// The factory receives a generation number (0, 1, 2, ... in creation
/// order), which callers typically turn into a per-subfilter seed.
pub struct QueuingFilter<F> {
    subfilters: VecDeque<F>,
    capacity: usize,
    counter: usize,
    generation: u64,
    memory_bits: u64,
    factory: Factory<F>,
}

impl<F: DuplicateFilter> QueuingFilter<F> {
    /// `levels` subfilters of capacity `capacity`. `memory_bits` is the
    /// overall budget `M`; the factory is expected to build subfilters of
    /// `floor(M / L)` bits (see [`sub_memory`]).
    pub fn new<G>(levels: usize, capacity: usize, memory_bits: u64, mut factory: G) -> Result<Self>
    where
        G: FnMut(u64) -> F + Send + 'static,
    {
        if levels == 0 {
            return Err(invalid("levels", "need at least one subfilter"));
        }
        if capacity == 0 {
            return Err(Error::EmptyWindow);
        }
        // Generation 0 ends up at the back and is the first one destroyed.
        let subfilters = (0..levels as u64).rev().map(&mut factory).collect();
        Ok(Self {
            subfilters,
            capacity,
            counter: 0,
            generation: levels as u64,
            memory_bits,
            factory: Box::new(factory),
        })
    }

    /// Queue for a target window: `c = floor(w / L)`, so `cL <= w < cL + L`.
    pub fn for_window<G>(window: usize, levels: usize, memory_bits: u64, factory: G) -> Result<Self>
    where
        G: FnMut(u64) -> F + Send + 'static,
    {
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
        Self::new(levels, capacity, memory_bits, factory)
    }

    pub fn levels(&self) -> usize {
        self.subfilters.len()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Insertions into the front subfilter, `n mod c` after `n` insertions.
    pub fn counter(&self) -> usize {
        self.counter
    }

    /// Generations of the live subfilters, front first.
    pub fn generations(&self) -> Vec<u64> {
        (0..self.levels() as u64).map(|i| self.generation - 1 - i).collect()
    }

    /// Subfilters from front (newest) to back (oldest).
    pub fn subfilters(&self) -> impl Iterator<Item = &F> {
        self.subfilters.iter()
    }
}

impl<F: DuplicateFilter> DuplicateFilter for QueuingFilter<F> {
    fn lookup(&self, element: Element) -> Decision {
        Decision::from_duplicate(self.subfilters.iter().any(|f| f.lookup(element).is_duplicate()))
    }

    fn insert(&mut self, element: Element) {
        self.subfilters.front_mut().expect("levels >= 1").insert(element);
        self.counter += 1;
        if self.counter == self.capacity {
            self.subfilters.pop_back();
            let fresh = (self.factory)(self.generation);
            self.generation += 1;
            self.subfilters.push_front(fresh);
            self.counter = 0;
        }
    }

    fn memory_bits(&self) -> u64 {
        self.subfilters.iter().map(DuplicateFilter::memory_bits).sum()
    }
}

impl<F> fmt::Debug for QueuingFilter<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QueuingFilter")
            .field("levels", &self.subfilters.len())
            .field("capacity", &self.capacity)
            .field("counter", &self.counter)
            .field("generation", &self.generation)
            .field("memory_bits", &self.memory_bits)
            .finish_non_exhaustive()
    }
}

/// Per-subfilter budget `floor(M / L)`.
pub fn sub_memory(memory_bits: u64, levels: usize) -> u64 {
    memory_bits / levels.max(1) as u64
}
