use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet of 2^{0} symbols exceeds the {max}-bit element width", max = crate::stream::MAX_GAMMA_BITS)]
    AlphabetTooLarge(u32),

    #[error("alphabet needs at least one bit (gamma_bits = 0)")]
    EmptyAlphabet,

    #[error("window must hold at least one element")]
    EmptyWindow,

    #[error("insufficient memory for window: {memory_bits} bits cannot cover a window of {window}")]
    InsufficientMemoryForWindow { memory_bits: u64, window: usize },

    #[error("insufficient memory: {kind} needs at least {needed} bits, got {memory_bits}")]
    InsufficientMemory {
        kind: &'static str,
        needed: u64,
        memory_bits: u64,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown filter kind `{0}`")]
    UnknownKind(String),

    #[error("stream length {n} must exceed the memory size {memory_bits}")]
    BoundHypothesis { n: u64, memory_bits: u64 },

    #[error("no feasible number of subfilters in the requested range")]
    EmptyFeasibleRange,

    #[error("strategy exceeded its budget of {budget} first-phase insertions")]
    BudgetExceeded { budget: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
