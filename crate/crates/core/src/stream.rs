//! Uniform element streams.
//!
//! A stream is drawn from SplitMix64 with its state initialized to the seed:
//! `x <- x + 0x9e3779b97f4a7c15`, output `mix64(x)`. Element `i` is the top
//! `b` bits of the `i`-th output, so identical `(seed, len, b)` give
//! bit-identical streams on every platform.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An alphabet symbol in `[0, 2^b)`.
pub type Element = u64;

/// Largest supported alphabet, `2^62` symbols.
pub const MAX_GAMMA_BITS: u32 = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamConfig {
    pub seed: u64,
    pub len: usize,
    pub gamma_bits: u32,
}

impl StreamConfig {
    pub fn new(seed: u64, len: usize, gamma_bits: u32) -> Self {
        Self { seed, len, gamma_bits }
    }

    pub fn validate(&self) -> Result<()> {
        check_gamma_bits(self.gamma_bits)
    }

    pub fn alphabet_size(&self) -> u64 {
        1u64 << self.gamma_bits
    }

    pub fn iter(&self) -> Result<UniformStream> {
        UniformStream::new(self.seed, self.gamma_bits, self.len)
    }
}

pub(crate) fn check_gamma_bits(gamma_bits: u32) -> Result<()> {
    match gamma_bits {
        0 => Err(Error::EmptyAlphabet),
        b if b > MAX_GAMMA_BITS => Err(Error::AlphabetTooLarge(b)),
        _ => Ok(()),
    }
}

/// Iterator over i.i.d. uniform elements of `[0, 2^b)`.
#[derive(Clone, Debug)]
pub struct UniformStream {
    rng: SplitMix64,
    shift: u32,
    remaining: usize,
}

impl UniformStream {
    pub fn new(seed: u64, gamma_bits: u32, len: usize) -> Result<Self> {
        check_gamma_bits(gamma_bits)?;
        Ok(Self {
            rng: SplitMix64::seed_from_u64(seed),
            shift: 64 - gamma_bits,
            remaining: len,
        })
    }

    /// Same generator without a length limit.
    pub fn unbounded(seed: u64, gamma_bits: u32) -> Result<Self> {
        Self::new(seed, gamma_bits, usize::MAX)
    }
}

impl Iterator for UniformStream {
    type Item = Element;

    #[inline]
    fn next(&mut self) -> Option<Element> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(self.rng.next_u64() >> self.shift)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

pub fn gen_stream(cfg: &StreamConfig) -> Result<Vec<Element>> {
    Ok(cfg.iter()?.collect())
}
