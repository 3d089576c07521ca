//! Two-phase adversarial games against duplicate detection filters.
//!
//! In the first phase the adversary inserts up to `n` elements of its
//! choice and sees the filter's answer to each. In the second it submits a
//! challenge `e*` and wins the false positive game if `e*` is reported as a
//! duplicate while absent from the last `w` elements, or the false negative
//! game if `e*` is reported unseen while present. Strategies only ever see
//! a [`GameView`]: the public configuration and the answers so far. The
//! filter itself, including its hash seeds, stays with the referee.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExactWindowFilter;
use crate::exec::{self, Execution};
use crate::filter::{Decision, DuplicateFilter};
use crate::hash::derive_seed;
use crate::metrics::binomial_sigma;
use crate::recipe::FilterRecipe;
use crate::stream::{Element, UniformStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Game {
    FalsePositive,
    FalseNegative,
}

/// Everything about the game and the target the adversary may know.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicConfig {
    pub game: Game,
    /// First-phase insertion budget `n`.
    pub budget: usize,
    pub window: usize,
    /// `L` and `c` of a queued target.
    pub levels: Option<usize>,
    pub capacity: Option<usize>,
    pub gamma_bits: u32,
}

/// What a strategy observes: public parameters and the answer to each of
/// its insertions, oldest first.
#[derive(Clone, Copy, Debug)]
pub struct GameView<'a> {
    pub config: &'a PublicConfig,
    pub decisions: &'a [Decision],
}

impl GameView<'_> {
    pub fn inserted(&self) -> usize {
        self.decisions.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Insert(Element),
    /// Ends the first phase with the challenge element.
    Challenge(Element),
}

pub trait Strategy {
    fn next_move(&mut self, view: GameView<'_>) -> Move;
}

/// Full game setup, including the target's secret seed material.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub game: Game,
    pub budget: usize,
    pub window: usize,
    pub recipe: FilterRecipe,
    pub memory_bits: u64,
    /// Overrides the queue capacity `c = floor(w / L)`, e.g. to reach
    /// `cL > w`.
    pub capacity: Option<usize>,
    pub gamma_bits: u32,
    pub trials: usize,
    pub seed: u64,
}

impl GameConfig {
    /// The part of the configuration strategies are allowed to see.
    pub fn public(&self) -> Result<PublicConfig> {
        let capacity = match (self.recipe.levels, self.capacity) {
            (Some(_), Some(c)) => Some(c),
            (Some(_), None) => Some(self.recipe.queue_shape(self.memory_bits, self.window)?.0),
            (None, _) => None,
        };
        Ok(PublicConfig {
            game: self.game,
            budget: self.budget,
            window: self.window,
            levels: self.recipe.levels,
            capacity,
            gamma_bits: self.gamma_bits,
        })
    }

    fn build_target(&self, seed: u64) -> Result<crate::filter::BoxedFilter> {
        match self.capacity {
            Some(c) if self.recipe.levels.is_some() => self.recipe.build_with_capacity(self.memory_bits, c, seed),
            _ => self.recipe.build(self.memory_bits, self.window, seed),
        }
    }
}

/// Strategies taken from the resistance arguments, plus a random baseline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttackStrategy {
    /// False positives on `cL > w`: `e*` repeated `cL - w - 1` times, then
    /// `w` random elements, then challenge `e*`. All `cL - 1` insertions
    /// stay in the queue, so the oldest subfilter still holds `e*` although
    /// it has left the window.
    PrependRepeat,
    /// False negatives: the segment `(e*, x_1, ..., x_{c-1})` inserted
    /// `L - 1` times, then `e*` once more, then challenge `e*`. Every live
    /// subfilter holds `e*`, so the challenge is missed only if all of them
    /// miss it.
    ConcatRepeat,
    /// False negatives on `w > (L-1)c`: `c - 1` fresh elements, `e*`, then
    /// `(L-1)c` fresh elements, then challenge `e*`. The last insertion
    /// rotates out the subfilter holding `e*` while `e*` is still in the
    /// window.
    EvictionPush,
    /// `n` random elements; the challenge is a fresh element (false
    /// positive game) or a random one of the last `w` inserted (false
    /// negative game).
    RandomBaseline,
}

impl AttackStrategy {
    pub const ALL: [AttackStrategy; 4] = [
        AttackStrategy::PrependRepeat,
        AttackStrategy::ConcatRepeat,
        AttackStrategy::EvictionPush,
        AttackStrategy::RandomBaseline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackStrategy::PrependRepeat => "prepend-repeat",
            AttackStrategy::ConcatRepeat => "concat-repeat",
            AttackStrategy::EvictionPush => "eviction-push",
            AttackStrategy::RandomBaseline => "random-baseline",
        }
    }

    /// Number of first-phase insertions the strategy makes, or `None` if
    /// it does not apply to the configuration.
    pub fn insertions(self, config: &PublicConfig) -> Option<usize> {
        let queue = config.levels.zip(config.capacity);
        match self {
            AttackStrategy::PrependRepeat => {
                let (l, c) = queue?;
                (c * l >= config.window + 2).then(|| c * l - 1)
            }
            AttackStrategy::ConcatRepeat => {
                let (l, c) = queue?;
                Some((l - 1) * c + 1)
            }
            AttackStrategy::EvictionPush => {
                let (l, c) = queue?;
                Some(l * c)
            }
            AttackStrategy::RandomBaseline => Some(config.budget),
        }
    }

    /// The first-phase stream and challenge for one trial. None of the
    /// constructive strategies adapt to the answers, so they are planned
    /// in advance.
    pub fn plan(self, config: &PublicConfig, seed: u64) -> Result<(Vec<Element>, Element)> {
        let n = self.insertions(config).ok_or_else(|| {
            crate::error::invalid("strategy", format!("{} does not apply to this target", self.name()))
        })?;
        let mut fresh = UniformStream::unbounded(seed, config.gamma_bits)?;
        let target = fresh.next().expect("unbounded");
        let mut other = || loop {
            let e = fresh.next().expect("unbounded");
            if e != target {
                return e;
            }
        };
        let w = config.window;
        Ok(match self {
            AttackStrategy::PrependRepeat => {
                let repeats = n - w;
                let mut s = vec![target; repeats];
                s.extend((0..w).map(|_| other()));
                (s, target)
            }
            AttackStrategy::ConcatRepeat => {
                let c = config.capacity.expect("queued");
                let segment: Vec<Element> = std::iter::once(target).chain((1..c).map(|_| other())).collect();
                let mut s: Vec<Element> = segment.iter().copied().cycle().take(n - 1).collect();
                s.push(target);
                (s, target)
            }
            AttackStrategy::EvictionPush => {
                let c = config.capacity.expect("queued");
                let mut s: Vec<Element> = (0..c - 1).map(|_| other()).collect();
                s.push(target);
                s.extend((0..n - c).map(|_| other()));
                (s, target)
            }
            AttackStrategy::RandomBaseline => {
                let s: Vec<Element> = (0..n).map(|_| other()).collect();
                let challenge = match config.game {
                    Game::FalsePositive => {
                        let tail = &s[n.saturating_sub(w)..];
                        loop {
                            let e = other();
                            if !tail.contains(&e) {
                                break e;
                            }
                        }
                    }
                    Game::FalseNegative if n > 0 => {
                        let k = (n.min(w) as u64).max(1);
                        s[n - 1 - crate::hash::fast_range(other(), k) as usize]
                    }
                    Game::FalseNegative => target,
                };
                (s, challenge)
            }
        })
    }

    pub fn instantiate(self, config: &PublicConfig, seed: u64) -> Result<PlannedStrategy> {
        let (inserts, challenge) = self.plan(config, seed)?;
        Ok(PlannedStrategy { inserts, challenge })
    }
}

impl std::str::FromStr for AttackStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        AttackStrategy::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .ok_or_else(|| crate::error::invalid("strategy", format!("unknown strategy `{s}`")))
    }
}

/// A fixed insertion sequence followed by a challenge.
#[derive(Clone, Debug)]
pub struct PlannedStrategy {
    inserts: Vec<Element>,
    challenge: Element,
}

impl Strategy for PlannedStrategy {
    fn next_move(&mut self, view: GameView<'_>) -> Move {
        match self.inserts.get(view.inserted()) {
            Some(&e) => Move::Insert(e),
            None => Move::Challenge(self.challenge),
        }
    }
}

/// Wins over trials of one game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackOutcome {
    pub wins: u64,
    pub trials: u64,
}

impl AttackOutcome {
    pub fn success(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.wins as f64 / self.trials as f64
        }
    }

    /// Binomial standard error of [`success`](Self::success).
    pub fn sigma(&self) -> f64 {
        binomial_sigma(self.success(), self.trials)
    }

    /// Wilson score interval at `z` standard deviations.
    pub fn wilson(&self, z: f64) -> (f64, f64) {
        if self.trials == 0 {
            return (0.0, 1.0);
        }
        let n = self.trials as f64;
        let p = self.success();
        let z2 = z * z;
        let center = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
        let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        ((center - half).max(0.0), (center + half).min(1.0))
    }
}

/// Plays one game between a fresh target and `strategy`; the target is
/// seeded with `target_seed`, which the strategy never sees.
pub fn play<S: Strategy + ?Sized>(config: &GameConfig, strategy: &mut S, target_seed: u64) -> Result<bool> {
    let public = config.public()?;
    let mut target = config.build_target(target_seed)?;
    let mut oracle = ExactWindowFilter::new(config.window, config.gamma_bits.max(1))?;
    let mut decisions = Vec::new();
    loop {
        let view = GameView {
            config: &public,
            decisions: &decisions,
        };
        match strategy.next_move(view) {
            Move::Insert(e) => {
                if decisions.len() == config.budget {
                    return Err(Error::BudgetExceeded { budget: config.budget });
                }
                decisions.push(target.step(e));
                oracle.insert(e);
            }
            Move::Challenge(e) => {
                let answer = target.lookup(e);
                let truth = oracle.lookup(e);
                return Ok(match config.game {
                    Game::FalsePositive => truth == Decision::Unseen && answer == Decision::Duplicate,
                    Game::FalseNegative => truth == Decision::Duplicate && answer == Decision::Unseen,
                });
            }
        }
    }
}

/// Runs `config.trials` independent games of `strategy`.
pub fn run_game(config: &GameConfig, strategy: AttackStrategy, exec: Execution) -> Result<AttackOutcome> {
    let public = config.public()?;
    run_game_with(config, |s| strategy.instantiate(&public, s), exec)
}

/// As [`run_game`] for any strategy; `make(seed)` builds the strategy of
/// one trial.
pub fn run_game_with<S, G>(config: &GameConfig, make: G, exec: Execution) -> Result<AttackOutcome>
where
    S: Strategy,
    G: Fn(u64) -> Result<S> + Sync + Send,
{
    if config.trials == 0 {
        return Err(crate::error::invalid("trials", "need at least one trial"));
    }
    let chunk = 64usize;
    let chunks = config.trials.div_ceil(chunk);
    let wins = exec::map_range(exec, chunks, |k| -> Result<u64> {
        let mut wins = 0;
        for t in k * chunk..((k + 1) * chunk).min(config.trials) {
            let trial = derive_seed(config.seed, t as u64);
            let mut strategy = make(derive_seed(trial, 0))?;
            if play(config, &mut strategy, derive_seed(trial, 1))? {
                wins += 1;
            }
        }
        Ok(wins)
    });
    let wins = wins.into_iter().sum::<Result<u64>>()?;
    Ok(AttackOutcome {
        wins,
        trials: config.trials as u64,
    })
}

/// Best false positive success probability against `L` subfilters that
/// each resist with probability `p`, when `cL <= w`.
pub fn fp_resistance_bound(p: f64, levels: usize) -> f64 {
    1.0 - (1.0 - p).powi(levels as i32)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FnResistance {
    /// Success probability some adversary attains: `p^L`.
    pub achievable: f64,
    /// Success probability no adversary exceeds.
    pub resistance: f64,
}

/// False negative bounds for `L` subfilters of capacity `c` that resist
/// false negatives with probability `p` and false-positive with probability
/// at least `q`.
pub fn fn_resistance_bounds(p: f64, q: f64, levels: usize, capacity: usize, window: usize) -> FnResistance {
    let l = levels as i32;
    let resistance = if window <= (levels - 1) * capacity {
        (1.0 - q).min(p).powi(l - 1) * p
    } else {
        (1.0 - q).max(p).powi(l)
    };
    FnResistance {
        achievable: p.powi(l),
        resistance,
    }
}
