//! Scenario runners.
//!
//! Every runner is a pure function of its [`Scenario`]: streams and filters
//! are seeded from `scenario.seed`, and results are gathered in input order,
//! so the produced files do not depend on scheduling.

use serde::{Deserialize, Serialize};
use slidedup::adversary::{fn_resistance_bounds, fp_resistance_bound, run_game, AttackStrategy, Game, GameConfig};
use slidedup::bounds::{ep_lower_bound, BoundQuery};
use slidedup::exec::{self, Execution};
use slidedup::experiment::{score, score_checkpoints};
use slidedup::hash::derive_seed;
use slidedup::zoo::{zoo_make, FilterKind};
use slidedup::{gen_stream, label_stream, Decision, Element, ErrorStats, FilterRecipe, StreamConfig};

use crate::datafile::{Cell, DataFile};
use crate::error::Result;
use crate::scenario::{Scenario, ScenarioKind};

/// Measured stats, or why the filter could not be built.
pub type PointResult<T> = std::result::Result<T, String>;

/// A grid point that could not be measured.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub file: String,
    pub point: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub files: Vec<DataFile>,
    pub skipped: Vec<Skipped>,
}

pub fn run(scenario: &Scenario, exec: Execution) -> Result<Outcome> {
    scenario.validate()?;
    match scenario.kind {
        ScenarioKind::Saturation => saturation(scenario, exec),
        ScenarioKind::WindowSweep => window_sweep(scenario, exec),
        ScenarioKind::LSweep => l_sweep(scenario, exec),
        ScenarioKind::QueuedVsVanilla => queued_vs_vanilla(scenario, exec),
        ScenarioKind::FiniteStream => finite_stream(scenario, exec),
        ScenarioKind::Adversary => adversary(scenario, exec),
    }
}

/// Stream `trial` of length `len`; `family` separates streams of
/// different lengths.
pub fn stream_for(scenario: &Scenario, family: usize, trial: usize, len: usize) -> Result<Vec<Element>> {
    let seed = derive_seed(derive_seed(derive_seed(scenario.seed, 0), family as u64), trial as u64);
    Ok(gen_stream(&StreamConfig::new(seed, len, scenario.gamma_bits))?)
}

/// Seed of the filter measured at point `index` in `trial`.
pub fn point_seed(scenario: &Scenario, trial: usize, index: usize) -> u64 {
    derive_seed(derive_seed(derive_seed(scenario.seed, 1), trial as u64), index as u64)
}

/// Error rate on the x100 scale.
pub fn percent(stats: &ErrorStats) -> f64 {
    100.0 * stats.error_rate()
}

/// A filter evaluated on a sliding window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub recipe: FilterRecipe,
    pub window: usize,
}

/// Measures every point on `trials` streams of length `len`, summing the
/// counts over trials. Points whose filter cannot be built yield the
/// error message instead.
pub fn evaluate(
    scenario: &Scenario,
    exec: Execution,
    family: usize,
    len: usize,
    points: &[Point],
) -> Result<Vec<PointResult<ErrorStats>>> {
    let mut windows: Vec<usize> = points.iter().map(|p| p.window).collect();
    windows.sort_unstable();
    windows.dedup();
    let mut acc: Vec<PointResult<ErrorStats>> = points.iter().map(|p| Ok(ErrorStats::new(p.window))).collect();
    // Labels take a stream's worth of memory per window, so only as many
    // windows as can run at once are labelled together.
    let batch = exec::parallelism(exec).max(1);
    for trial in 0..scenario.trials {
        let stream = stream_for(scenario, family, trial, len)?;
        for group in windows.chunks(batch) {
            let labels = exec::map(exec, group, |&w| label_stream(&stream, w));
            let labels = labels.into_iter().collect::<slidedup::Result<Vec<Vec<Decision>>>>()?;
            let members: Vec<usize> = (0..points.len())
                .filter(|&i| group.contains(&points[i].window))
                .collect();
            let results = exec::map(exec, &members, |&i| {
                let p = points[i];
                let truth = &labels[group.iter().position(|&w| w == p.window).expect("window in group")];
                let mut filter = p
                    .recipe
                    .build(scenario.memory_bits, p.window, point_seed(scenario, trial, i))
                    .map_err(|e| e.to_string())?;
                Ok(score(&mut filter, &stream, truth, p.window, 0))
            });
            for (&i, r) in members.iter().zip(results) {
                match (&mut acc[i], r) {
                    (Ok(total), Ok(stats)) => *total += stats,
                    (slot @ Ok(_), Err(e)) => *slot = Err(e),
                    (Err(_), _) => {}
                }
            }
        }
    }
    Ok(acc)
}

fn recipe(scenario: &Scenario, kind: FilterKind, levels: Option<usize>) -> FilterRecipe {
    let mut params = scenario.params;
    params.gamma_bits = scenario.gamma_bits;
    FilterRecipe { kind, params, levels }
}

fn data_file(scenario: &Scenario, name: String, columns: &[&str]) -> DataFile {
    DataFile::new(name, columns)
        .meta("scenario", scenario.kind)
        .meta("M", scenario.memory_bits)
        .meta("b", scenario.gamma_bits)
        .meta("seed", scenario.seed)
        .meta("trials", scenario.trials)
}

fn skip(file: &str, point: String, reason: String) -> Skipped {
    Skipped {
        file: file.to_string(),
        point,
        reason,
    }
}

/// Cumulative unwindowed stats of each filter at each checkpoint, summed
/// over trials. A filter that cannot be built yields its error message.
pub fn saturation_stats(
    scenario: &Scenario,
    exec: Execution,
) -> Result<Vec<(FilterKind, PointResult<Vec<ErrorStats>>)>> {
    let mut checkpoints = scenario.stream_lens.clone();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let len = *checkpoints.last().expect("validated");
    let mut params = scenario.params;
    params.gamma_bits = scenario.gamma_bits;
    let mut acc: Vec<_> = scenario
        .filters
        .iter()
        .map(|&k| (k, Ok(vec![ErrorStats::new(len); checkpoints.len()])))
        .collect();
    for trial in 0..scenario.trials {
        let stream = stream_for(scenario, 0, trial, len)?;
        // A window spanning the whole stream: "seen at any earlier step".
        let truth = label_stream(&stream, len)?;
        let results = exec::map_range(exec, scenario.filters.len(), |i| {
            let mut filter = zoo_make(
                scenario.filters[i],
                scenario.memory_bits,
                &params,
                point_seed(scenario, trial, i),
            )
            .map_err(|e| e.to_string())?;
            Ok::<_, String>(score_checkpoints(&mut filter, &stream, &truth, len, &checkpoints))
        });
        for ((_, slot), r) in acc.iter_mut().zip(results) {
            match (&mut *slot, r) {
                (Ok(total), Ok(stats)) => total.iter_mut().zip(stats).for_each(|(t, s)| *t += s),
                (Ok(_), Err(e)) => *slot = Err(e),
                (Err(_), _) => {}
            }
        }
    }
    Ok(acc)
}

fn saturation(scenario: &Scenario, exec: Execution) -> Result<Outcome> {
    let mut checkpoints = scenario.stream_lens.clone();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let mut out = Outcome::default();
    for (kind, stats) in saturation_stats(scenario, exec)? {
        let name = format!("saturation_{kind}.dat");
        match stats {
            Ok(stats) => {
                let mut file = data_file(scenario, name, &["n", "Error"]).meta("filter", kind);
                for (&n, s) in checkpoints.iter().zip(&stats) {
                    file.push(vec![n.into(), percent(s).into()]);
                }
                out.files.push(file);
            }
            Err(reason) => out.skipped.push(skip(&name, format!("filter={kind}"), reason)),
        }
    }
    let mut bound = data_file(scenario, "saturation_bound.dat".into(), &["n", "Bound"]);
    for &n in &checkpoints {
        if n as u64 > scenario.memory_bits {
            let q = BoundQuery {
                n: n as u64,
                memory_bits: scenario.memory_bits,
                gamma_bits: scenario.gamma_bits,
            };
            bound.push(vec![n.into(), (100.0 * ep_lower_bound(q)?).into()]);
        }
    }
    out.files.push(bound);
    Ok(out)
}

/// Curves of the window sweep: each filter, queued when a single `L` is
/// given.
fn window_sweep(scenario: &Scenario, exec: Execution) -> Result<Outcome> {
    let levels: Vec<Option<usize>> = if scenario.levels.is_empty() {
        vec![None]
    } else {
        scenario.levels.iter().map(|&l| Some(l)).collect()
    };
    let mut curves = Vec::new();
    for &kind in &scenario.filters {
        for &l in &levels {
            curves.push(recipe(scenario, kind, l));
        }
    }
    let points: Vec<Point> = curves
        .iter()
        .flat_map(|&r| scenario.windows.iter().map(move |&window| Point { recipe: r, window }))
        .collect();
    let results = evaluate(scenario, exec, 0, scenario.stream_lens[0], &points)?;
    let mut out = Outcome::default();
    for (curve, chunk) in curves.iter().zip(results.chunks(scenario.windows.len())) {
        let name = match curve.levels {
            None => format!("window_{}.dat", curve.kind),
            Some(l) => format!("window_{}_L{l}.dat", curve.kind),
        };
        let mut file = data_file(scenario, name.clone(), &["w", "Error"])
            .meta("filter", curve.kind)
            .meta("N", scenario.stream_lens[0]);
        if let Some(l) = curve.levels {
            file = file.meta("L", l);
        }
        for (&w, r) in scenario.windows.iter().zip(chunk) {
            match r {
                Ok(s) => file.push(vec![w.into(), percent(s).into()]),
                Err(e) => out.skipped.push(skip(&name, format!("w={w}"), e.clone())),
            }
        }
        out.files.push(file);
    }
    Ok(out)
}

fn l_sweep(scenario: &Scenario, exec: Execution) -> Result<Outcome> {
    let points: Vec<Point> = scenario
        .windows
        .iter()
        .flat_map(|&window| {
            scenario.levels.iter().map(move |&l| Point {
                recipe: recipe(scenario, scenario.subfilter, Some(l)),
                window,
            })
        })
        .collect();
    let results = evaluate(scenario, exec, 0, scenario.stream_lens[0], &points)?;
    let mut out = Outcome::default();
    for (&w, chunk) in scenario.windows.iter().zip(results.chunks(scenario.levels.len())) {
        let name = format!("lsweep_w{w}.dat");
        let mut file = data_file(scenario, name.clone(), &["L", "Error"])
            .meta("filter", scenario.subfilter)
            .meta("N", scenario.stream_lens[0])
            .meta("w", w);
        for (&l, r) in scenario.levels.iter().zip(chunk) {
            match r {
                Ok(s) => file.push(vec![l.into(), percent(s).into()]),
                Err(e) => out.skipped.push(skip(&name, format!("L={l}"), e.clone())),
            }
        }
        out.files.push(file);
    }
    Ok(out)
}

/// Per filter kind: the bare filter, then the best realized queue over the
/// `L` grid at each window (ties go to the smaller `L`).
fn queued_vs_vanilla(scenario: &Scenario, exec: Execution) -> Result<Outcome> {
    let per_window = 1 + scenario.levels.len();
    let mut points = Vec::new();
    for &kind in &scenario.filters {
        for &window in &scenario.windows {
            points.push(Point {
                recipe: recipe(scenario, kind, None),
                window,
            });
            for &l in &scenario.levels {
                points.push(Point {
                    recipe: recipe(scenario, kind, Some(l)),
                    window,
                });
            }
        }
    }
    let results = evaluate(scenario, exec, 0, scenario.stream_lens[0], &points)?;
    let mut out = Outcome::default();
    let per_kind = per_window * scenario.windows.len();
    for (&kind, chunk) in scenario.filters.iter().zip(results.chunks(per_kind)) {
        let vanilla_name = format!("vanilla_{kind}.dat");
        let queued_name = format!("queued_{kind}.dat");
        let n = scenario.stream_lens[0];
        let mut vanilla = data_file(scenario, vanilla_name.clone(), &["w", "Error"])
            .meta("filter", kind)
            .meta("N", n);
        let mut queued = data_file(scenario, queued_name.clone(), &["w", "Error", "L"])
            .meta("filter", kind)
            .meta("N", n);
        for (&w, row) in scenario.windows.iter().zip(chunk.chunks(per_window)) {
            match &row[0] {
                Ok(s) => vanilla.push(vec![w.into(), percent(s).into()]),
                Err(e) => out.skipped.push(skip(&vanilla_name, format!("w={w}"), e.clone())),
            }
            let best = scenario
                .levels
                .iter()
                .zip(&row[1..])
                .filter_map(|(&l, r)| r.as_ref().ok().map(|s| (l, percent(s))))
                .fold(None::<(usize, f64)>, |best, (l, er)| match best {
                    Some((_, b)) if b <= er => best,
                    _ => Some((l, er)),
                });
            match best {
                Some((l, er)) => queued.push(vec![w.into(), er.into(), l.into()]),
                None => out
                    .skipped
                    .push(skip(&queued_name, format!("w={w}"), "no L in the grid fits".into())),
            }
        }
        out.files.push(vanilla);
        out.files.push(queued);
    }
    Ok(out)
}

fn finite_stream(scenario: &Scenario, exec: Execution) -> Result<Outcome> {
    let l = scenario.levels[0];
    let points: Vec<Point> = scenario
        .windows
        .iter()
        .map(|&window| Point {
            recipe: recipe(scenario, scenario.subfilter, Some(l)),
            window,
        })
        .collect();
    let mut out = Outcome::default();
    for (family, &n) in scenario.stream_lens.iter().enumerate() {
        let results = evaluate(scenario, exec, family, n, &points)?;
        let name = format!("finite_N{n}.dat");
        let mut file = data_file(scenario, name.clone(), &["w", "Error"])
            .meta("filter", scenario.subfilter)
            .meta("N", n)
            .meta("L", l);
        for (&w, r) in scenario.windows.iter().zip(&results) {
            match r {
                Ok(s) => file.push(vec![w.into(), percent(s).into()]),
                Err(e) => out.skipped.push(skip(&name, format!("w={w}"), e.clone())),
            }
        }
        out.files.push(file);
    }
    Ok(out)
}

/// One row of the adversary table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AttackCase {
    /// Kind of the queued subfilters under attack.
    pub subfilter: FilterKind,
    pub strategy: AttackStrategy,
    pub game: Game,
    pub levels: usize,
    pub capacity: usize,
    pub window: usize,
    /// Success some adversary attains, when known.
    pub achievable: Option<f64>,
    /// Success no adversary exceeds, when one is guaranteed.
    pub bound: Option<f64>,
}

/// The attacks run for `L` subfilters of capacity `c`.
pub fn attack_cases(scenario: &Scenario, levels: usize, capacity: usize) -> Vec<AttackCase> {
    let p = scenario.params.synthetic_fn;
    let q = scenario.params.synthetic_fp;
    let full = capacity * levels;
    let fn_case = |strategy, window: usize| {
        let b = fn_resistance_bounds(p, q, levels, capacity, window);
        AttackCase {
            subfilter: scenario.subfilter,
            strategy,
            game: Game::FalseNegative,
            levels,
            capacity,
            window,
            achievable: (strategy == AttackStrategy::ConcatRepeat).then_some(b.achievable),
            bound: Some(b.resistance),
        }
    };
    let mut cases = vec![fn_case(AttackStrategy::ConcatRepeat, full)];
    if levels >= 2 {
        cases.push(fn_case(AttackStrategy::ConcatRepeat, (levels - 1) * capacity));
    }
    cases.push(fn_case(AttackStrategy::EvictionPush, full));
    // Exact subfilters neither miss nor invent elements: p = q = 0.
    cases.push(AttackCase {
        subfilter: FilterKind::Exact,
        bound: Some(fn_resistance_bounds(0.0, 0.0, levels, capacity, full).resistance),
        ..fn_case(AttackStrategy::EvictionPush, full)
    });
    cases.push(fn_case(AttackStrategy::RandomBaseline, full));
    cases.push(AttackCase {
        subfilter: scenario.subfilter,
        strategy: AttackStrategy::RandomBaseline,
        game: Game::FalsePositive,
        levels,
        capacity,
        window: full,
        achievable: None,
        bound: Some(fp_resistance_bound(q, levels)),
    });
    // With cL > w the oldest subfilter outlives the window and no bound
    // holds.
    let short = full.saturating_sub((capacity / 2).max(2));
    if short >= 1 {
        cases.push(AttackCase {
            subfilter: scenario.subfilter,
            strategy: AttackStrategy::PrependRepeat,
            game: Game::FalsePositive,
            levels,
            capacity,
            window: short,
            achievable: None,
            bound: None,
        });
    }
    cases
}

/// Game setup for `case`, seeded by its row index.
pub fn game_config(scenario: &Scenario, case: &AttackCase, index: usize) -> GameConfig {
    GameConfig {
        game: case.game,
        budget: 0,
        window: case.window,
        recipe: recipe(scenario, case.subfilter, Some(case.levels)),
        memory_bits: scenario.memory_bits,
        capacity: Some(case.capacity),
        gamma_bits: scenario.gamma_bits,
        trials: scenario.trials,
        seed: point_seed(scenario, 0, index),
    }
}

fn adversary(scenario: &Scenario, exec: Execution) -> Result<Outcome> {
    let name = "adversary.dat";
    let mut file = data_file(
        scenario,
        name.into(),
        &[
            "strategy",
            "game",
            "subfilter",
            "L",
            "c",
            "w",
            "trials",
            "wins",
            "success",
            "sigma",
            "achievable",
            "bound",
        ],
    )
    .meta("filter", scenario.subfilter)
    .meta("p_fn", scenario.params.synthetic_fn)
    .meta("p_fp", scenario.params.synthetic_fp);
    let mut out = Outcome::default();
    let mut index = 0;
    for &w in &scenario.windows {
        for &l in &scenario.levels {
            let c = w / l;
            if c == 0 {
                out.skipped
                    .push(skip(name, format!("w={w} L={l}"), "L exceeds the window".into()));
                continue;
            }
            for case in attack_cases(scenario, l, c) {
                let mut config = game_config(scenario, &case, index);
                index += 1;
                let point = format!("{} {} w={} L={l}", case.strategy.name(), case.subfilter, case.window);
                let public = match config.public() {
                    Ok(p) => p,
                    Err(e) => {
                        out.skipped.push(skip(name, point, e.to_string()));
                        continue;
                    }
                };
                config.budget = case.strategy.insertions(&public).unwrap_or(case.window);
                let outcome = match run_game(&config, case.strategy, exec) {
                    Ok(o) => o,
                    Err(e) => {
                        out.skipped.push(skip(name, point, e.to_string()));
                        continue;
                    }
                };
                let opt = |v: Option<f64>| v.map_or(Cell::from("-"), Cell::from);
                file.push(vec![
                    case.strategy.name().into(),
                    match case.game {
                        Game::FalsePositive => "fp",
                        Game::FalseNegative => "fn",
                    }
                    .into(),
                    case.subfilter.name().into(),
                    l.into(),
                    c.into(),
                    case.window.into(),
                    outcome.trials.into(),
                    outcome.wins.into(),
                    outcome.success().into(),
                    outcome.sigma().into(),
                    opt(case.achievable),
                    opt(case.bound),
                ]);
            }
        }
    }
    out.files.push(file);
    Ok(out)
}
