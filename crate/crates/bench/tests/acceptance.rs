//! Acceptance checks. Each test prints one `PASS` or `FAIL` line and fails
//! when its criterion does not hold.

use std::time::Instant;

use slidedup::adversary::{run_game, AttackStrategy, Game, GameConfig};
use slidedup::bounds::{ep_lower_bound, ep_lower_bound_inf, BoundQuery};
use slidedup::exec::Execution;
use slidedup::hash::derive_seed;
use slidedup::metrics::binomial_sigma;
use slidedup::queuing::{phase_stats, predict_fn, predict_fnr, predict_fp, predict_fpr, AlphabetSize};
use slidedup::short_hash::{fp_theory, wmax_solve, ShortHashKind};
use slidedup::zoo::{FilterKind, FilterParams, SyntheticSubfilter};
use slidedup::{
    gen_stream, label_stream, CshfFilter, Decision, DuplicateFilter, ErrorStats, ExactWindowFilter, FilterRecipe,
    QueuingFilter, ShfFilter, StreamConfig, SubfilterErrorProfile,
};
use slidedup_bench::datafile::parse_data;
use slidedup_bench::run::{run, saturation_stats};
use slidedup_bench::scenario::{Scenario, ScenarioKind};

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!("{} #{id} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion #{id} ({name}) failed: {detail}");
}

fn stream(seed: u64, len: usize, b: u32) -> Vec<u64> {
    gen_stream(&StreamConfig::new(seed, len, b)).unwrap()
}

/// Duplicate iff the element occurs among the previous `w`, by rescanning.
fn naive_labels(stream: &[u64], w: usize) -> Vec<Decision> {
    (0..stream.len())
        .map(|i| Decision::from_duplicate(stream[i.saturating_sub(w)..i].contains(&stream[i])))
        .collect()
}

#[test]
fn c01_exact_filter() {
    let start = Instant::now();
    let mut errors = 0u64;
    let mut worst = 0.0f64;
    for b in [8u32, 12, 20] {
        for w in [1usize, 16, 256] {
            let bound = w as f64 * ((w as f64).log2() + 2.0 * f64::from(b));
            for seed in 0..10 {
                let s = stream(derive_seed(u64::from(b) * 1000 + w as u64, seed), 100_000, b);
                let truth = naive_labels(&s, w);
                let mut f = ExactWindowFilter::new(w, b).unwrap();
                for (&e, &t) in s.iter().zip(&truth) {
                    if f.step(e) != t {
                        errors += 1;
                    }
                }
                worst = worst.max(f.memory_bits() as f64 / bound);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "exact window filter",
        errors == 0 && worst <= 1.0 && secs < 10.0,
        format!("{errors} wrong answers, max memory/bound {worst:.3}, {secs:.2}s"),
    );
}

#[test]
fn c02_zero_false_negatives() {
    let mut steps = 0usize;
    let mut fns = 0u64;
    let mut configs = 0;
    for k in 0..40u64 {
        let h = derive_seed(2, k);
        let w = 1 + (h % 400) as usize;
        let b = 4 + ((h >> 16) % 20) as u32;
        // Budgets from starved (many collisions) to comfortable.
        let m = (w as u64) * (2 + (h >> 32) % 40);
        let len = 25_000;
        let s = stream(derive_seed(h, 1), len, b);
        let truth = label_stream(&s, w).unwrap();
        let mut filters: Vec<Box<dyn DuplicateFilter>> = Vec::new();
        if let Ok(f) = ShfFilter::new(m, w, derive_seed(h, 2)) {
            filters.push(Box::new(f));
        }
        if let Ok(f) = CshfFilter::new(m, w, derive_seed(h, 3)) {
            filters.push(Box::new(f));
        }
        for mut f in filters {
            configs += 1;
            for (&e, &t) in s.iter().zip(&truth) {
                if f.step(e) == Decision::Unseen && t == Decision::Duplicate {
                    fns += 1;
                }
            }
            steps += len;
        }
    }
    report(
        2,
        "SHF and CSHF never miss a duplicate",
        fns == 0 && steps >= 1_000_000,
        format!("{fns} false negatives over {steps} steps in {configs} runs"),
    );
}

/// `1 - (1 - q)^w`: some of `w` independent slots matches.
fn any_slot(q: f64, w: f64) -> f64 {
    1.0 - (1.0 - q).powf(w)
}

fn realized_fpr(mut f: impl DuplicateFilter, w: usize, b: u32, n: usize, seed: u64) -> f64 {
    let s = stream(seed, n, b);
    let truth = label_stream(&s, w).unwrap();
    let mut stats = ErrorStats::new(w);
    for (i, (&e, &t)) in s.iter().zip(&truth).enumerate() {
        let a = f.step(e);
        if i >= w {
            stats.record(t, a);
        }
    }
    stats.fpr()
}

#[test]
fn c03_closed_form_false_positives() {
    let start = Instant::now();
    // CSHF stores M/w-bit fingerprints; SHF spends half its budget on
    // them and the rest on a dictionary of log2(w)-bit keys.
    let cshf_pred = any_slot((-(2e4 / 1000.0f64)).exp2(), 1000.0);
    let shf_width = 2e4 / (2.0 * 500.0) - 0.5 * 500f64.log2();
    let shf_pred = any_slot((-shf_width).exp2(), 500.0);
    assert!((cshf_pred - 9.53e-4).abs() < 1e-6 && (shf_pred - 1.06e-2).abs() < 1e-4);
    assert!((fp_theory(ShortHashKind::Cshf, 2e4, 1000.0).probability - cshf_pred).abs() < 1e-12);
    assert!((fp_theory(ShortHashKind::Shf, 2e4, 500.0).probability - shf_pred).abs() < 1e-12);

    let cshf = realized_fpr(CshfFilter::new(20_000, 1000, 31).unwrap(), 1000, 20, 200_000, 3);
    let shf = realized_fpr(ShfFilter::new(20_000, 500, 32).unwrap(), 500, 20, 200_000, 4);
    let rel = |x: f64, p: f64| (x - p).abs() / p;
    let secs = start.elapsed().as_secs_f64();
    report(
        3,
        "closed-form false positive rates",
        rel(cshf, cshf_pred) <= 0.25 && rel(shf, shf_pred) <= 0.25 && secs < 30.0,
        format!(
            "CSHF {cshf:.3e} vs {cshf_pred:.3e} ({:+.1}%), SHF {shf:.3e} vs {shf_pred:.3e} ({:+.1}%), {secs:.2}s",
            100.0 * (cshf / cshf_pred - 1.0),
            100.0 * (shf / shf_pred - 1.0)
        ),
    );
}

#[test]
fn c04_wmax_fits() {
    let cshf = wmax_solve(ShortHashKind::Cshf, 100_000) as f64;
    let shf = wmax_solve(ShortHashKind::Shf, 100_000) as f64;
    let (cshf_fit, shf_fit) = (0.0627 * 1e5 + 443.0, 0.0233 * 1e5 + 186.0);
    let rel = |x: f64, y: f64| (x - y).abs() / y;
    report(
        4,
        "w_max against the linear fits",
        rel(cshf, cshf_fit) <= 0.2 && rel(shf, shf_fit) <= 0.2,
        format!("CSHF {cshf} vs {cshf_fit:.0}, SHF {shf} vs {shf_fit:.0}"),
    );
}

#[test]
fn c05_lower_bound_values() {
    let expected = [
        (2_000_000u64, 49.63),
        (3_000_000, 66.16),
        (10_000_000, 89.31),
        (150_000_000, 98.34),
    ];
    let mut worst = 0.0f64;
    let mut detail = Vec::new();
    for (n, want) in expected {
        let got = 100.0
            * ep_lower_bound(BoundQuery {
                n,
                memory_bits: 1_000_000,
                gamma_bits: 26,
            })
            .unwrap();
        worst = worst.max((got - want).abs());
        detail.push(format!("{n}: {got:.2}"));
    }
    let inf = 100.0 * ep_lower_bound_inf(1_000_000, 26).unwrap();
    worst = worst.max((inf - 98.52).abs());
    detail.push(format!("inf: {inf:.2}"));
    report(
        5,
        "lower bound values",
        worst <= 0.05,
        format!("{} (max deviation {worst:.3})", detail.join(", ")),
    );
}

#[test]
fn c06_saturation_dominance() {
    let mut s = Scenario::defaults(ScenarioKind::Saturation, false);
    s.filters = vec![FilterKind::Qht, FilterKind::Sbf, FilterKind::Cuckoo, FilterKind::Bloom];
    let checkpoints = s.stream_lens.clone();
    let mut pass = true;
    let mut detail = Vec::new();
    for (kind, stats) in saturation_stats(&s, Execution::default()).unwrap() {
        let stats = stats.unwrap();
        let mut min_margin = f64::INFINITY;
        for (&n, st) in checkpoints.iter().zip(&stats) {
            let lb = ep_lower_bound(BoundQuery {
                n: n as u64,
                memory_bits: s.memory_bits,
                gamma_bits: s.gamma_bits,
            })
            .unwrap();
            let margin = (st.error_rate() - lb) / st.error_rate_sigma().max(f64::MIN_POSITIVE);
            min_margin = min_margin.min(margin);
            pass &= st.error_rate() >= lb - 3.0 * st.error_rate_sigma();
        }
        let ers: Vec<f64> = stats.iter().map(|st| st.er()).collect();
        let monotone = ers.windows(2).all(|p| p[1] >= p[0] - 2.0);
        pass &= monotone;
        detail.push(format!(
            "{kind} ER {:.1}..{:.1} min (ER-LB)/sigma {min_margin:.1}{}",
            ers[0],
            ers[ers.len() - 1],
            if monotone { "" } else { " NOT monotone" }
        ));
    }
    report(6, "zoo filters above the lower bound", pass, detail.join("; "));
}

fn synthetic_queue_phases(levels: usize, c: usize, b: u32, n: usize, seed: u64) -> Vec<ErrorStats> {
    let w = levels * c;
    let s = stream(seed, n, b);
    let truth = label_stream(&s, w).unwrap();
    let mut q = QueuingFilter::new(levels, c, 0, move |g| {
        SyntheticSubfilter::new(c, 0.05, 0.02, derive_seed(seed, g), 0).unwrap()
    })
    .unwrap();
    phase_stats(&mut q, &s, &truth, w, w)
}

/// `|x - p| <= 3 sigma(p, n)`; with no trials the check is vacuous.
fn within_3_sigma(x: f64, p: f64, n: u64) -> bool {
    n == 0 || (x - p).abs() <= 3.0 * binomial_sigma(p, n)
}

#[test]
fn c07_queue_predictions() {
    let (c, b) = (250usize, 30u32);
    let profile = SubfilterErrorProfile::constant(c, 0.05, 0.02).unwrap();
    let mut pass = true;
    let mut detail = Vec::new();
    for levels in [2usize, 4, 8] {
        let w = levels * c;
        let alphabet = AlphabetSize::Bits(b);
        let phases = synthetic_queue_phases(levels, c, b, 1_000_000, levels as u64);
        let mut total = ErrorStats::new(w);
        phases.iter().for_each(|p| total += *p);
        let fpr = predict_fpr(&profile, levels);
        let fnr = predict_fnr(&profile, levels, w, alphabet);
        let mut ok = within_3_sigma(total.fpr(), fpr, total.n_unseen);
        ok &= within_3_sigma(total.fnr(), fnr, total.n_dup);
        for j in [0, c / 2, c - 1] {
            let s = phases[j];
            ok &= within_3_sigma(s.fpr(), predict_fp(&profile, levels, j), s.n_unseen);
            ok &= within_3_sigma(s.fnr(), predict_fn(&profile, levels, j, w, alphabet), s.n_dup);
        }
        pass &= ok;
        detail.push(format!(
            "L={levels} FPR {:.5} vs {fpr:.5}, FNR {:.3} vs {fnr:.3} over {} duplicates{}",
            total.fpr(),
            total.fnr(),
            total.n_dup,
            if total.n_dup < 30 { " (FNR uninformative)" } else { "" }
        ));
    }
    // Not gated: with a 2^9 alphabet duplicates are plentiful.
    let phases = synthetic_queue_phases(4, 50, 9, 400_000, 9);
    let mut total = ErrorStats::new(200);
    phases.iter().for_each(|p| total += *p);
    let reference = predict_fnr(
        &SubfilterErrorProfile::constant(50, 0.05, 0.02).unwrap(),
        4,
        200,
        AlphabetSize::Bits(9),
    );
    detail.push(format!(
        "reference L=4 c=50 b=9: FNR {:.3} vs {reference:.3}",
        total.fnr()
    ));
    report(
        7,
        "queue predictions over synthetic subfilters",
        pass,
        detail.join("; "),
    );
}

fn exact_queue_fnr(b: u32, n: usize, seed: u64) -> ErrorStats {
    let (levels, c) = (2, 5);
    let w = levels * c;
    let s = stream(seed, n, b);
    let truth = label_stream(&s, w).unwrap();
    let mut q = QueuingFilter::new(levels, c, 0, move |_| ExactWindowFilter::new(c, b).unwrap()).unwrap();
    let mut total = ErrorStats::new(w);
    phase_stats(&mut q, &s, &truth, w, w).iter().for_each(|p| total += *p);
    total
}

#[test]
fn c08_exact_subfilter_queue_fnr() {
    let profile = SubfilterErrorProfile::exact(5);
    let predicted = predict_fnr(&profile, 2, 10, AlphabetSize::Bits(30));
    let gated = exact_queue_fnr(30, 1_000_000, 8);
    let reference = exact_queue_fnr(10, 1_000_000, 8);
    let pass = gated.n_dup > 0 && (gated.fnr() - 0.40).abs() <= 0.02;
    report(
        8,
        "exact-subfilter queue FNR",
        pass,
        format!(
            "b=30: FNR {:.3} over {} duplicates; formula {predicted:.3}; reference b=10: FNR {:.3} over {} duplicates",
            gated.fnr(),
            gated.n_dup,
            reference.fnr(),
            reference.n_dup
        ),
    );
}

#[test]
fn c09_l_sweep_improves_on_one_subfilter() {
    let mut s = Scenario::defaults(ScenarioKind::LSweep, false);
    s.levels = vec![1, 2, 3, 5, 10, 20];
    let out = run(&s, Execution::default()).unwrap();
    let data = parse_data(&out.files[0].render()).unwrap();
    let ls = data.column("L").unwrap();
    let ers = data.column("Error").unwrap();
    let single = ers[ls.iter().position(|&l| l == 1.0).unwrap()];
    let (best_l, best) =
        ls.iter().zip(&ers).filter(|(&l, _)| l > 1.0).fold(
            (0.0, f64::INFINITY),
            |acc, (&l, &e)| if e < acc.1 { (l, e) } else { acc },
        );
    report(
        9,
        "queued QHT beats a single subfilter",
        best < single - 2.0,
        format!("L=1 ER {single:.2}, best L={best_l} ER {best:.2}"),
    );
}

fn game(strategy: AttackStrategy, kind: FilterKind, params: FilterParams, trials: usize, seed: u64) -> (f64, f64) {
    let config = GameConfig {
        game: Game::FalseNegative,
        budget: 100,
        window: 100,
        recipe: FilterRecipe::queued(kind, 2).with_params(FilterParams {
            gamma_bits: 40,
            ..params
        }),
        memory_bits: 100_000,
        capacity: Some(50),
        gamma_bits: 40,
        trials,
        seed,
    };
    let o = run_game(&config, strategy, Execution::default()).unwrap();
    (o.success(), o.sigma())
}

#[test]
fn c10_adversarial_bounds() {
    let trials = 10_000;
    let (concat, _) = game(
        AttackStrategy::ConcatRepeat,
        FilterKind::Synthetic,
        FilterParams::synthetic(0.0, 0.5),
        trials,
        10,
    );
    let concat_ok = (concat - 0.25).abs() <= 3.0 * binomial_sigma(0.25, trials as u64);
    let (evict, _) = game(
        AttackStrategy::EvictionPush,
        FilterKind::Exact,
        FilterParams::default(),
        trials,
        11,
    );
    let evict_ok = evict >= 0.99;

    let s = Scenario::defaults(ScenarioKind::Adversary, false);
    let out = run(&s, Execution::default()).unwrap();
    let data = parse_data(&out.files[0].render()).unwrap();
    let col = |name: &str| data.columns.iter().position(|c| c == name).unwrap();
    let mut violations = Vec::new();
    let mut checked = 0;
    for row in &data.rows {
        let Ok(bound) = row[col("bound")].parse::<f64>() else {
            continue;
        };
        checked += 1;
        let success: f64 = row[col("success")].parse().unwrap();
        let n: u64 = row[col("trials")].parse().unwrap();
        let sigma = binomial_sigma(success, n).max(binomial_sigma(bound, n));
        if success > bound + 3.0 * sigma {
            violations.push(format!(
                "{} {} w={}",
                row[col("strategy")],
                row[col("subfilter")],
                row[col("w")]
            ));
        }
    }
    report(
        10,
        "adversarial success within resistance bounds",
        concat_ok && evict_ok && violations.is_empty() && out.skipped.is_empty(),
        format!(
            "concat-repeat {concat:.4} vs 0.25, eviction-push {evict:.4}, {checked} bounded rows, violations: {violations:?}"
        ),
    );
}

/// Largest fall in ER along a run of consecutive decreasing grid points
/// with `w` in `[lo, hi]`.
fn deepest_dip(ws: &[f64], ers: &[f64], lo: f64, hi: f64) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = ws
        .iter()
        .zip(ers)
        .filter(|(&w, _)| w >= lo && w <= hi)
        .map(|(&w, &e)| (w, e))
        .collect();
    let mut best = (0.0, 0.0);
    let mut start = 0;
    for i in 1..pts.len() {
        if pts[i].1 >= pts[i - 1].1 {
            start = i;
        } else if pts[start].1 - pts[i].1 > best.0 {
            best = (pts[start].1 - pts[i].1, pts[i].0);
        }
    }
    best
}

#[test]
fn c11_finite_stream_dip() {
    let s = Scenario::defaults(ScenarioKind::FiniteStream, false);
    let l = s.levels[0] as f64;
    let out = run(&s, Execution::default()).unwrap();
    let mut any = false;
    let mut detail = Vec::new();
    for (file, &n) in out.files.iter().zip(&s.stream_lens) {
        let data = parse_data(&file.render()).unwrap();
        let (depth, at) = deepest_dip(
            &data.column("w").unwrap(),
            &data.column("Error").unwrap(),
            n as f64 / l / 3.0,
            3.0 * n as f64,
        );
        any |= depth >= 5.0;
        detail.push(format!("N={n}: deepest dip {depth:.2} points, ending at w={at}"));
    }
    report(11, "finite-stream dip", any, detail.join("; "));
}

#[test]
fn c12_manifest_reproduces_files() {
    let small = |kind| {
        let mut s = Scenario::defaults(kind, false);
        match kind {
            ScenarioKind::Saturation => s.stream_lens = vec![20_000, 50_000],
            ScenarioKind::WindowSweep => s.windows = vec![100, 1000, 5000],
            ScenarioKind::LSweep => s.levels = vec![1, 4, 16],
            ScenarioKind::QueuedVsVanilla => s.windows = vec![1000, 10_000],
            ScenarioKind::FiniteStream => {
                s.stream_lens = vec![50_000];
                s.windows = vec![1000, 10_000, 100_000];
            }
            ScenarioKind::Adversary => s.trials = 500,
        }
        if kind != ScenarioKind::Saturation && kind != ScenarioKind::FiniteStream && kind != ScenarioKind::Adversary {
            s.stream_lens = vec![100_000];
        }
        s
    };
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for kind in ScenarioKind::ALL {
        let s = small(kind);
        let first = tempfile::tempdir().unwrap();
        let second = tempfile::tempdir().unwrap();
        let outcome = run(&s, Execution::default()).unwrap();
        slidedup_bench::manifest::write_outputs(first.path(), &s, &outcome).unwrap();
        let manifest = first.path().join(slidedup_bench::manifest::MANIFEST_FILE);
        let code = slidedup_bench::cli::main_with([
            "slidedup-bench".as_ref(),
            "--manifest".as_ref(),
            manifest.as_os_str(),
            "--out".as_ref(),
            second.path().as_os_str(),
        ]);
        assert!(code == 0 || code == 2, "re-run of {kind} exited with {code}");
        let mut names: Vec<String> = outcome.files.iter().map(|f| f.name.clone()).collect();
        names.push(slidedup_bench::manifest::MANIFEST_FILE.into());
        for name in names {
            compared += 1;
            let a = std::fs::read(first.path().join(&name)).unwrap();
            let b = std::fs::read(second.path().join(&name)).unwrap();
            if a != b {
                mismatches.push(format!("{kind}/{name}"));
            }
        }
    }
    report(
        12,
        "manifest re-runs are byte-identical",
        mismatches.is_empty(),
        format!("{compared} files compared, mismatches: {mismatches:?}"),
    );
}
