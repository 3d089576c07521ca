use serde::{Deserialize, Serialize};

use crate::stream::Element;

/// Answer of a duplicate detection filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    Duplicate,
    Unseen,
}

impl Decision {
    #[inline]
    pub fn from_duplicate(is_duplicate: bool) -> Self {
        if is_duplicate {
            Decision::Duplicate
        } else {
            Decision::Unseen
        }
    }

    #[inline]
    pub fn is_duplicate(self) -> bool {
        self == Decision::Duplicate
    }
}

/// Behavioral contract shared by every filter.
///
/// `lookup` never mutates state. `memory_bits` is the capacity of the
/// filter's scalable state (arrays, queues, maps) at information-theoretic
/// field widths; a few machine words of fixed per-instance bookkeeping
/// (lengths, seeds, RNG state) are not counted.
pub trait DuplicateFilter {
    fn lookup(&self, element: Element) -> Decision;

    fn insert(&mut self, element: Element);

    fn memory_bits(&self) -> u64;

    /// Lookup followed by insert.
    #[inline]
    fn step(&mut self, element: Element) -> Decision {
        let decision = self.lookup(element);
        self.insert(element);
        decision
    }
}

impl<F: DuplicateFilter + ?Sized> DuplicateFilter for Box<F> {
    #[inline]
    fn lookup(&self, element: Element) -> Decision {
        (**self).lookup(element)
    }

    #[inline]
    fn insert(&mut self, element: Element) {
        (**self).insert(element)
    }

    fn memory_bits(&self) -> u64 {
        (**self).memory_bits()
    }
}

pub type BoxedFilter = Box<dyn DuplicateFilter + Send>;
