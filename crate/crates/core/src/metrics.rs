use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use crate::filter::Decision;

/// Realized false positive / false negative counts over a sliding window.
///
/// Rates with an empty denominator are reported as 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub n_unseen: u64,
    pub n_dup: u64,
    pub n_fp: u64,
    pub n_fn: u64,
    pub window: usize,
}

impl ErrorStats {
    pub fn new(window: usize) -> Self {
        Self {
            window,
            ..Self::default()
        }
    }

    #[inline]
    pub fn record(&mut self, truth: Decision, answer: Decision) {
        match truth {
            Decision::Unseen => {
                self.n_unseen += 1;
                self.n_fp += u64::from(answer == Decision::Duplicate);
            }
            Decision::Duplicate => {
                self.n_dup += 1;
                self.n_fn += u64::from(answer == Decision::Unseen);
            }
        }
    }

    pub fn total(&self) -> u64 {
        self.n_unseen + self.n_dup
    }

    pub fn fpr(&self) -> f64 {
        ratio(self.n_fp, self.n_unseen)
    }

    pub fn fnr(&self) -> f64 {
        ratio(self.n_fn, self.n_dup)
    }

    /// `FPR + FNR`, in `[0, 2]`.
    pub fn error_rate(&self) -> f64 {
        self.fpr() + self.fnr()
    }

    /// `(FPR + FNR) * 100`, the scale used in reports.
    pub fn er(&self) -> f64 {
        100.0 * self.error_rate()
    }

    pub fn fpr_sigma(&self) -> f64 {
        binomial_sigma(self.fpr(), self.n_unseen)
    }

    pub fn fnr_sigma(&self) -> f64 {
        binomial_sigma(self.fnr(), self.n_dup)
    }

    /// Standard error of [`error_rate`](Self::error_rate), treating both
    /// rates as independent binomial proportions.
    pub fn error_rate_sigma(&self) -> f64 {
        self.fpr_sigma().hypot(self.fnr_sigma())
    }
}

impl AddAssign for ErrorStats {
    fn add_assign(&mut self, rhs: Self) {
        self.n_unseen += rhs.n_unseen;
        self.n_dup += rhs.n_dup;
        self.n_fp += rhs.n_fp;
        self.n_fn += rhs.n_fn;
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// `sqrt(p(1-p)/n)`; zero when there are no trials.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        (p * (1.0 - p) / n as f64).sqrt()
    }
}
