//! Lower bounds on the error probability of any duplicate detection
//! filter with `M` bits of memory on a uniform stream over `2^b` symbols.
//!
//! For a stream of length `n > M`:
//!
//! ```text
//! EP_n >= 1 - (1 - (1 - 2^-b)^M) / (1 - (1 - 2^-b)^n)
//! ```
//!
//! and as `n` grows this tends to `(1 - 2^-b)^M ~ 1 - M / 2^b`. Powers of
//! `1 - 2^-b` are evaluated as `exp(k ln1p(-2^-b))` so that alphabets up to
//! `2^62` keep full precision.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stream::check_gamma_bits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundQuery {
    /// Stream length `n`.
    pub n: u64,
    pub memory_bits: u64,
    pub gamma_bits: u32,
}

/// `ln(1 - 2^-b)`.
fn log_miss(gamma_bits: u32) -> f64 {
    (-(-f64::from(gamma_bits)).exp2()).ln_1p()
}

/// `1 - (1 - 2^-b)^k`: probability that a fixed symbol occurs among `k`
/// uniform draws.
fn hit_probability(k: f64, gamma_bits: u32) -> f64 {
    -(k * log_miss(gamma_bits)).exp_m1()
}

pub fn ep_lower_bound(q: BoundQuery) -> Result<f64> {
    check_gamma_bits(q.gamma_bits)?;
    if q.n <= q.memory_bits {
        return Err(Error::BoundHypothesis {
            n: q.n,
            memory_bits: q.memory_bits,
        });
    }
    let ratio = hit_probability(q.memory_bits as f64, q.gamma_bits) / hit_probability(q.n as f64, q.gamma_bits);
    Ok((1.0 - ratio).clamp(0.0, 1.0))
}

/// `(1 - 2^-b)^M`, the limit of [`ep_lower_bound`] as `n` grows.
pub fn ep_lower_bound_inf(memory_bits: u64, gamma_bits: u32) -> Result<f64> {
    check_gamma_bits(gamma_bits)?;
    Ok((memory_bits as f64 * log_miss(gamma_bits)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lb(n: u64) -> f64 {
        ep_lower_bound(BoundQuery {
            n,
            memory_bits: 1_000_000,
            gamma_bits: 26,
        })
        .unwrap()
    }

    #[test]
    fn reference_coordinates() {
        for (n, expected) in [
            (2_000_000u64, 49.63),
            (3_000_000, 66.16),
            (10_000_000, 89.31),
            (150_000_000, 98.34),
        ] {
            assert!((100.0 * lb(n) - expected).abs() < 0.05, "n={n}: {}", 100.0 * lb(n));
        }
        let inf = 100.0 * ep_lower_bound_inf(1_000_000, 26).unwrap();
        assert!((inf - 98.52).abs() < 0.05, "{inf}");
    }

    #[test]
    fn hypothesis_enforced() {
        let q = BoundQuery {
            n: 10,
            memory_bits: 10,
            gamma_bits: 8,
        };
        assert_eq!(
            ep_lower_bound(q),
            Err(Error::BoundHypothesis { n: 10, memory_bits: 10 })
        );
        assert!(ep_lower_bound(BoundQuery { n: 11, ..q }).unwrap() < 0.1);
    }

    #[test]
    fn monotone_and_convergent() {
        let mut prev = 0.0;
        for k in 1..40 {
            let v = lb(1_000_000 + k * 5_000_000);
            assert!(v >= prev);
            prev = v;
        }
        let far = lb(1_000_000_000);
        assert!((far - ep_lower_bound_inf(1_000_000, 26).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn infinite_bound_shape() {
        assert_eq!(ep_lower_bound_inf(0, 20).unwrap(), 1.0);
        assert!(ep_lower_bound_inf(2000, 20).unwrap() < ep_lower_bound_inf(1000, 20).unwrap());
        assert!(ep_lower_bound_inf(1000, 21).unwrap() > ep_lower_bound_inf(1000, 20).unwrap());
        // Large alphabets: 1 - M/2^b to first order.
        let v = ep_lower_bound_inf(1000, 40).unwrap();
        let gap = 1000.0 / 2f64.powi(40);
        assert!(((1.0 - v) - gap).abs() < 1e-6 * gap);
        assert!(ep_lower_bound_inf(1000, 62).unwrap() < 1.0);
    }

    #[test]
    fn rejects_bad_alphabets() {
        assert!(ep_lower_bound_inf(10, 0).is_err());
        assert!(ep_lower_bound_inf(10, 63).is_err());
    }
}
