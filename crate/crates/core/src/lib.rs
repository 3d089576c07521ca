//! Sliding-window duplicate detection.
//!
//! A duplicate detection filter reads a stream of elements and, for each
//! one, reports whether it appeared among the previous `w` elements,
//! using a fixed memory budget of `M` bits. This crate provides:
//!
//! * the contract every filter satisfies ([`DuplicateFilter`]) and a
//!   harness that scores a filter against exact ground truth
//!   ([`run_experiment`]);
//! * an exact filter ([`ExactWindowFilter`]) and Short Hash Filters
//!   ([`ShfFilter`], [`CshfFilter`]) with closed-form error predictions;
//! * unwindowed filters ([`zoo`]) and the queuing construction that turns
//!   any of them into a sliding-window filter ([`queuing`]);
//! * lower bounds on the error of any filter ([`bounds`]) and adversarial
//!   games against queued filters ([`adversary`]).
//!
//! Everything is deterministic in its seeds. Independent runs can be spread
//! over threads with [`exec`]; the `parallel` feature (on by default)
//! enables the rayon backend.

pub mod adversary;
pub mod bounds;
pub mod error;
pub mod exact;
pub mod exec;
pub mod experiment;
pub mod filter;
pub mod hash;
pub mod metrics;
pub mod queuing;
pub mod recipe;
pub mod short_hash;
pub mod stream;
pub mod zoo;

pub use error::{Error, Result};
pub use exact::{exact_memory_bound, ExactWindowFilter};
pub use exec::Execution;
pub use experiment::{label_stream, run_experiment};
pub use filter::{BoxedFilter, Decision, DuplicateFilter};
pub use metrics::ErrorStats;
pub use queuing::{QueuingFilter, SubfilterErrorProfile};
pub use recipe::FilterRecipe;
pub use short_hash::{fp_theory, wmax_solve, CshfFilter, ShfFilter, ShortHashKind};
pub use stream::{gen_stream, Element, StreamConfig};
pub use zoo::{FilterKind, FilterParams};
