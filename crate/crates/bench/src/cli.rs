//! Command-line interface.
//!
//! Exit status: 0 on success, 1 for bad arguments, 2 when some grid points
//! were skipped or the run failed.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;
use slidedup::exec::Execution;
use slidedup::zoo::FilterKind;

use crate::error::{BenchError, Result};
use crate::grid::{parse_grid, parse_number};
use crate::manifest::{write_outputs, Manifest};
use crate::run::run;
use crate::scenario::{Scenario, ScenarioKind};

#[derive(Debug, Parser)]
#[command(
    name = "slidedup-bench",
    version,
    about = "Sliding-window duplicate detection experiments"
)]
pub struct Args {
    /// saturation, window-sweep, l-sweep, queued-vs-vanilla, finite-stream
    /// or adversary.
    #[arg(long, required_unless_present = "manifest")]
    pub scenario: Option<ScenarioKind>,

    /// Filter kinds drawn as curves (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub filter: Vec<FilterKind>,

    /// Subfilter kind of queued filters.
    #[arg(long)]
    pub subfilter: Option<FilterKind>,

    #[arg(long, value_parser = parse_number)]
    pub memory_bits: Option<u64>,

    #[arg(long, value_parser = parse_number, conflicts_with = "window_grid")]
    pub window: Option<u64>,

    /// Comma list or `logspace:lo:hi:k`.
    #[arg(long)]
    pub window_grid: Option<String>,

    /// Elements are drawn uniformly from 2^b symbols.
    #[arg(long)]
    pub gamma_bits: Option<u32>,

    /// Stream length, or a grid of lengths (checkpoints for saturation).
    #[arg(long)]
    pub stream_len: Option<String>,

    /// Number of queued subfilters.
    #[arg(long = "L", value_parser = parse_number, conflicts_with = "l_grid")]
    pub l: Option<u64>,

    #[arg(long = "L-grid")]
    pub l_grid: Option<String>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, value_parser = parse_number)]
    pub trials: Option<u64>,

    /// False negative probability of synthetic subfilters.
    #[arg(long)]
    pub p_fn: Option<f64>,

    /// False positive probability of synthetic subfilters.
    #[arg(long)]
    pub p_fp: Option<f64>,

    /// Stabilization count of stable Bloom filters.
    #[arg(long)]
    pub sbf_decrements: Option<u32>,

    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,

    /// Use the long grids (streams up to 1.5e8) instead of desk-scale ones.
    #[arg(long)]
    pub paper_scale: bool,

    /// Re-run the scenario recorded in a manifest; other scenario flags
    /// are rejected.
    #[arg(long, conflicts_with_all = [
        "scenario", "filter", "subfilter", "memory_bits", "window", "window_grid", "gamma_bits",
        "stream_len", "l", "l_grid", "seed", "trials", "p_fn", "p_fp", "sbf_decrements", "paper_scale",
    ])]
    pub manifest: Option<PathBuf>,

    /// Run grid points one at a time.
    #[arg(long)]
    pub sequential: bool,
}

fn grid(spec: &str) -> Result<Vec<usize>> {
    Ok(parse_grid(spec)?.into_iter().map(|v| v as usize).collect())
}

/// Scenario defaults with the flags applied.
pub fn resolve(args: &Args) -> Result<Scenario> {
    if let Some(path) = &args.manifest {
        return Ok(Manifest::load(path)?.scenario);
    }
    let kind = args
        .scenario
        .ok_or_else(|| BenchError::Args("--scenario is required".into()))?;
    let mut s = Scenario::defaults(kind, args.paper_scale);
    if !args.filter.is_empty() {
        s.filters = args.filter.clone();
    }
    if let Some(k) = args.subfilter {
        s.subfilter = k;
    }
    if let Some(m) = args.memory_bits {
        s.memory_bits = m;
    }
    if let Some(w) = args.window {
        s.windows = vec![w as usize];
    }
    if let Some(g) = &args.window_grid {
        s.windows = grid(g)?;
    }
    if let Some(b) = args.gamma_bits {
        s.gamma_bits = b;
    }
    if let Some(n) = &args.stream_len {
        s.stream_lens = grid(n)?;
    }
    if let Some(l) = args.l {
        s.levels = vec![l as usize];
    }
    if let Some(g) = &args.l_grid {
        s.levels = grid(g)?;
    }
    if let Some(seed) = args.seed {
        s.seed = seed;
    }
    if let Some(t) = args.trials {
        s.trials = t as usize;
    }
    if let Some(p) = args.p_fn {
        s.params.synthetic_fn = p;
    }
    if let Some(p) = args.p_fp {
        s.params.synthetic_fp = p;
    }
    if let Some(d) = args.sbf_decrements {
        s.params.sbf.decrements = d;
    }
    s.validate()?;
    Ok(s)
}

/// Resolves, runs and writes a scenario; returns the manifest written.
pub fn execute(args: &Args) -> Result<Manifest> {
    let scenario = resolve(args)?;
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let outcome = run(&scenario, exec)?;
    write_outputs(&args.out, &scenario, &outcome)
}

/// Runs the command line `argv` (program name first) and returns the exit
/// status.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&args) {
        Ok(manifest) => {
            for f in &manifest.files {
                println!("{}", args.out.join(f).display());
            }
            for s in &manifest.skipped {
                eprintln!("skipped {} [{}]: {}", s.file, s.point, s.reason);
            }
            if manifest.skipped.is_empty() {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
