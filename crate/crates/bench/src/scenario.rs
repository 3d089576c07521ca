//! Scenario definitions and their default parameters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use slidedup::zoo::FilterKind;
use slidedup::FilterParams;

use crate::error::{BenchError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// Unwindowed error rate against stream length, with the lower bound.
    Saturation,
    /// Error rate against window size.
    WindowSweep,
    /// Error rate of a queued filter against the number of subfilters.
    LSweep,
    /// Bare filters against their best queued version, per window.
    QueuedVsVanilla,
    /// Error rate against window size for several stream lengths.
    FiniteStream,
    /// Success rates of attack strategies against queued filters.
    Adversary,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] = [
        ScenarioKind::Saturation,
        ScenarioKind::WindowSweep,
        ScenarioKind::LSweep,
        ScenarioKind::QueuedVsVanilla,
        ScenarioKind::FiniteStream,
        ScenarioKind::Adversary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Saturation => "saturation",
            ScenarioKind::WindowSweep => "window-sweep",
            ScenarioKind::LSweep => "l-sweep",
            ScenarioKind::QueuedVsVanilla => "queued-vs-vanilla",
            ScenarioKind::FiniteStream => "finite-stream",
            ScenarioKind::Adversary => "adversary",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| BenchError::Args(format!("unknown scenario `{s}`")))
    }
}

/// A fully resolved scenario: everything needed to reproduce its output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub kind: ScenarioKind,
    /// Filters drawn as separate curves.
    pub filters: Vec<FilterKind>,
    /// Subfilter kind of queued filters.
    pub subfilter: FilterKind,
    pub memory_bits: u64,
    pub windows: Vec<usize>,
    pub gamma_bits: u32,
    /// Stream lengths; checkpoints for the saturation scenario.
    pub stream_lens: Vec<usize>,
    /// Numbers of subfilters `L`.
    pub levels: Vec<usize>,
    pub seed: u64,
    /// Independent streams (or games) per point.
    pub trials: usize,
    /// Filter knobs; the synthetic error probabilities drive the
    /// adversary table.
    pub params: FilterParams,
    pub paper_scale: bool,
}

impl Scenario {
    /// Desk-scale defaults, or the long grids with `paper_scale`.
    pub fn defaults(kind: ScenarioKind, paper_scale: bool) -> Self {
        use FilterKind::*;
        let base = Scenario {
            kind,
            filters: vec![],
            subfilter: Qht,
            memory_bits: 100_000,
            windows: vec![],
            gamma_bits: 18,
            stream_lens: vec![1_000_000],
            levels: vec![],
            seed: 1,
            trials: 1,
            params: FilterParams::default(),
            paper_scale,
        };
        match kind {
            ScenarioKind::Saturation => Scenario {
                filters: vec![Qht, Sbf, Cuckoo, Bloom],
                memory_bits: if paper_scale { 1_000_000 } else { 10_000 },
                gamma_bits: if paper_scale { 26 } else { 18 },
                stream_lens: if paper_scale {
                    vec![
                        2_000_000,
                        3_000_000,
                        5_000_000,
                        10_000_000,
                        20_000_000,
                        50_000_000,
                        100_000_000,
                        150_000_000,
                    ]
                } else {
                    vec![20_000, 50_000, 100_000, 200_000, 500_000, 1_000_000]
                },
                ..base
            },
            ScenarioKind::WindowSweep => Scenario {
                filters: vec![Shf, Cshf],
                windows: log_grid(
                    100,
                    if paper_scale { 100_000 } else { 30_000 },
                    if paper_scale { 21 } else { 14 },
                ),
                ..base
            },
            ScenarioKind::LSweep => Scenario {
                windows: vec![10_000],
                levels: if paper_scale {
                    (1..=100).collect()
                } else {
                    vec![1, 2, 3, 4, 5, 6, 8, 10, 13, 16, 20, 25, 32, 40, 50, 64, 80, 100]
                },
                ..base
            },
            ScenarioKind::QueuedVsVanilla => Scenario {
                filters: vec![Qht],
                windows: log_grid(100, 100_000, if paper_scale { 16 } else { 10 }),
                levels: vec![1, 2, 3, 5, 10, 20, 50],
                stream_lens: vec![if paper_scale { 1_000_000 } else { 300_000 }],
                ..base
            },
            ScenarioKind::FiniteStream => Scenario {
                gamma_bits: 16,
                levels: vec![10],
                stream_lens: if paper_scale {
                    vec![100_000, 1_000_000, 10_000_000, 100_000_000]
                } else {
                    vec![100_000, 1_000_000]
                },
                windows: log_grid(
                    1_000,
                    if paper_scale { 300_000_000 } else { 3_000_000 },
                    if paper_scale { 36 } else { 28 },
                ),
                ..base
            },
            ScenarioKind::Adversary => Scenario {
                filters: vec![],
                subfilter: Synthetic,
                gamma_bits: 40,
                windows: vec![100],
                levels: vec![2, 4],
                trials: if paper_scale { 100_000 } else { 10_000 },
                params: FilterParams::synthetic(0.0, 0.5),
                ..base
            },
        }
    }

    /// Checks the parameters a scenario relies on.
    pub fn validate(&self) -> Result<()> {
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(BenchError::Args(format!("{}: {what}", self.kind)))
            }
        };
        need(self.trials >= 1, "trials must be at least 1")?;
        need((1..=62).contains(&self.gamma_bits), "gamma bits must lie in 1..=62")?;
        need(!self.stream_lens.is_empty(), "need a stream length")?;
        match self.kind {
            ScenarioKind::Saturation => need(!self.filters.is_empty(), "need at least one filter"),
            ScenarioKind::WindowSweep | ScenarioKind::QueuedVsVanilla => {
                need(!self.filters.is_empty(), "need at least one filter")?;
                need(!self.windows.is_empty(), "need a window grid")?;
                need(self.stream_lens.len() == 1, "takes a single stream length")
            }
            ScenarioKind::LSweep => {
                need(!self.windows.is_empty(), "need a window")?;
                need(!self.levels.is_empty(), "need an L grid")?;
                need(self.stream_lens.len() == 1, "takes a single stream length")
            }
            ScenarioKind::FiniteStream => {
                need(!self.windows.is_empty(), "need a window grid")?;
                need(self.levels.len() == 1, "takes a single L")
            }
            ScenarioKind::Adversary => {
                need(!self.windows.is_empty(), "need a window")?;
                need(
                    !self.levels.is_empty() && !self.levels.contains(&0),
                    "need L values of at least 1",
                )?;
                need(
                    (0.0..=1.0).contains(&self.params.synthetic_fn),
                    "p_fn must be a probability",
                )?;
                need(
                    (0.0..=1.0).contains(&self.params.synthetic_fp),
                    "p_fp must be a probability",
                )
            }
        }
    }
}

fn log_grid(lo: u64, hi: u64, k: usize) -> Vec<usize> {
    crate::grid::parse_grid(&format!("logspace:{lo}:{hi}:{k}"))
        .expect("valid built-in grid")
        .into_iter()
        .map(|v| v as usize)
        .collect()
}
