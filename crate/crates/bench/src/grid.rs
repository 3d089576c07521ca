//! Parameter grids: `a,b,c` lists or `logspace:lo:hi:k`.

use crate::error::{BenchError, Result};

/// Parses a grid of positive integers.
///
/// `logspace:lo:hi:k` gives `k` points geometrically spaced from `lo` to
/// `hi` inclusive, rounded to integers, deduplicated. Numbers may use
/// scientific notation (`1e5`). The result is sorted ascending.
pub fn parse_grid(spec: &str) -> Result<Vec<u64>> {
    let spec = spec.trim();
    let bad = |why: &str| BenchError::Grid {
        spec: spec.to_string(),
        reason: why.to_string(),
    };
    let mut values = if let Some(rest) = spec.strip_prefix("logspace:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [lo, hi, k] = parts[..] else {
            return Err(bad("expected logspace:lo:hi:k"));
        };
        let lo = parse_number(lo).map_err(|e| bad(&e))?;
        let hi = parse_number(hi).map_err(|e| bad(&e))?;
        let k: usize = k.trim().parse().map_err(|_| bad("point count must be an integer"))?;
        if lo > hi {
            return Err(bad("lower end exceeds upper end"));
        }
        if k == 0 {
            return Err(bad("need at least one point"));
        }
        logspace(lo, hi, k)
    } else {
        spec.split(',')
            .map(|s| parse_number(s).map_err(|e| bad(&e)))
            .collect::<Result<Vec<u64>>>()?
    };
    values.sort_unstable();
    values.dedup();
    if values.is_empty() {
        return Err(bad("empty grid"));
    }
    Ok(values)
}

fn logspace(lo: u64, hi: u64, k: usize) -> Vec<u64> {
    if k == 1 {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    (0..k)
        .map(|i| {
            let t = i as f64 / (k - 1) as f64;
            ((a + t * (b - a)).exp().round() as u64).clamp(lo, hi)
        })
        .collect()
}

/// A positive integer, possibly written as `1e5` or `2.5e3`.
pub fn parse_number(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return if v == 0 {
            Err(format!("`{s}` must be positive"))
        } else {
            Ok(v)
        };
    }
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(v >= 1.0 && v.fract() == 0.0 && v < 1.8e19) {
        return Err(format!("`{s}` is not a positive integer"));
    }
    Ok(v as u64)
}
