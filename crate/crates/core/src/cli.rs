// SPDX-License-Identifier: MIT OR Apache-2.0

//! Command-line front end: simulate, entropy, detect, evaluate, plot-data.

use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::detection::{
    detect_fluctuations, DetectorParams, DEFAULT_LAMBDA, DEFAULT_MAD_FLOOR, DEFAULT_MIN_RUN,
};
use crate::entropy::{BinRule, WindowParams};
use crate::evaluation::match_and_score;
use crate::formats::{self, EventsDoc, ReportDoc, ReportParams};
use crate::simulation::{fixture_specs, generate_series};
use crate::sliding::entropy_sequence;

pub const DEFAULT_WINDOW: usize = 100;

#[derive(Debug, Parser)]
#[command(
    name = "entcpd",
    version,
    about = "Change-point detection from sliding-window normalized entropy"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded multi-segment series and its change points
    Simulate(SimulateArgs),
    /// Compute the normalized-entropy sequence of a series
    Entropy(EntropyArgs),
    /// Detect entropy fluctuations
    Detect(DetectArgs),
    /// Score detected events against known change points
    Evaluate(EvaluateArgs),
    /// Join a series and its entropy sequence for plotting
    PlotData(PlotDataArgs),
}

/// `auto` (logarithmic rule) or an explicit bin count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bins {
    Auto,
    Fixed(usize),
}

impl FromStr for Bins {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Bins::Auto);
        }
        s.parse()
            .map(Bins::Fixed)
            .map_err(|_| format!("expected `auto` or an integer, got {s:?}"))
    }
}

impl From<Bins> for BinRule {
    fn from(b: Bins) -> Self {
        match b {
            Bins::Auto => BinRule::LnRule,
            Bins::Fixed(k) => BinRule::Explicit(k),
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Segment spec JSON
    #[arg(
        long,
        short,
        required_unless_present = "fixture",
        conflicts_with = "fixture"
    )]
    pub input: Option<PathBuf>,
    /// Use the built-in six-segment reference fixture
    #[arg(long)]
    pub fixture: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Series CSV to write
    #[arg(long, short)]
    pub output: PathBuf,
    /// Ground-truth JSON to write
    #[arg(long)]
    pub truth: PathBuf,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Series CSV
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    /// Bin count, or `auto` for round(ln window)
    #[arg(long, default_value = "auto")]
    pub bins: Bins,
    /// Entropy CSV to write
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Entropy CSV
    #[arg(long, short)]
    pub input: PathBuf,
    /// Window size; inferred from the first `t` of the entropy file when omitted
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    pub lambda: f64,
    #[arg(long, default_value_t = DEFAULT_MIN_RUN)]
    pub min_run: usize,
    /// Trailing baseline length [default: 2 * window]
    #[arg(long)]
    pub baseline_span: Option<usize>,
    /// Merge events closer than this [default: window]
    #[arg(long)]
    pub merge_gap: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAD_FLOOR)]
    pub mad_floor: f64,
    /// Events JSON to write
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Ground-truth JSON
    #[arg(long)]
    pub truth: PathBuf,
    /// Events JSON
    #[arg(long)]
    pub events: PathBuf,
    /// Matching radius and percentage base; taken from the events file when omitted
    #[arg(long)]
    pub window: Option<usize>,
    /// Report JSON to write
    #[arg(long, short)]
    pub output: PathBuf,
    /// Also write the rendered table here
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Do not print the table to stdout
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct PlotDataArgs {
    /// Series CSV
    #[arg(long)]
    pub series: PathBuf,
    /// Entropy CSV
    #[arg(long)]
    pub entropy: PathBuf,
    /// Joined CSV to write
    #[arg(long, short)]
    pub output: PathBuf,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Entropy(a) => cmd_entropy(&a),
        Command::Detect(a) => cmd_detect(&a),
        Command::Evaluate(a) => cmd_evaluate(&a),
        Command::PlotData(a) => cmd_plot_data(&a),
    }
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let specs = match &args.input {
        Some(path) => formats::read_spec(&read_text(path)?)
            .with_context(|| format!("reading segment spec {}", path.display()))?,
        None => fixture_specs(),
    };
    let (series, truth) = generate_series(&specs, args.seed)?;
    formats::write_series_csv(&series, create(&args.output)?)
        .with_context(|| format!("writing {}", args.output.display()))?;
    write_text(&args.truth, &formats::to_json(&truth)?)
}

pub fn cmd_entropy(args: &EntropyArgs) -> Result<()> {
    let series = read_series(&args.input)?;
    let params = WindowParams::new(args.window, args.bins.into())?;
    let hseq = entropy_sequence(&series, &params)?;
    formats::write_entropy_csv(&hseq, create(&args.output)?)
        .with_context(|| format!("writing {}", args.output.display()))?;
    Ok(())
}

pub fn cmd_detect(args: &DetectArgs) -> Result<()> {
    let hseq = formats::read_entropy_csv(open(&args.input)?)
        .with_context(|| format!("reading entropy CSV {}", args.input.display()))?;
    let delta = match args.window {
        Some(w) if w != hseq.offset() => bail!(
            "window {w} does not match entropy file, whose first t is {}",
            hseq.offset()
        ),
        Some(w) => w,
        None => hseq.offset(),
    };
    let params = DetectorParams {
        delta,
        lambda: args.lambda,
        min_run: args.min_run,
        baseline_span: args.baseline_span.unwrap_or(2 * delta),
        merge_gap: args.merge_gap.unwrap_or(delta),
        mad_floor: args.mad_floor,
    };
    let events = detect_fluctuations(&hseq, &params)?;
    let doc = EventsDoc {
        params: Some(params),
        events,
    };
    write_text(&args.output, &formats::to_json(&doc)?)
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<()> {
    let truth = formats::read_truth(&read_text(&args.truth)?)
        .with_context(|| format!("reading truth {}", args.truth.display()))?;
    let events = formats::read_events(&read_text(&args.events)?)
        .with_context(|| format!("reading events {}", args.events.display()))?;
    let window = match (args.window, events.params) {
        (Some(w), _) => w,
        (None, Some(p)) => p.delta,
        (None, None) => DEFAULT_WINDOW,
    };
    if window == 0 {
        bail!("window must be positive");
    }
    let mut sorted = events.events.clone();
    sorted.sort_by_key(|e| e.onset);
    let report = match_and_score(&truth, &sorted, window);
    let table = report.render_table();
    let doc = ReportDoc {
        params: ReportParams {
            window,
            detector: events.params,
            seed: truth.seed,
        },
        report,
    };
    write_text(&args.output, &formats::to_json(&doc)?)?;
    if let Some(path) = &args.table {
        write_text(path, &table)?;
    }
    if !args.quiet {
        print!("{table}");
    }
    Ok(())
}

pub fn cmd_plot_data(args: &PlotDataArgs) -> Result<()> {
    let series = read_series(&args.series)?;
    let hseq = formats::read_entropy_csv(open(&args.entropy)?)
        .with_context(|| format!("reading entropy CSV {}", args.entropy.display()))?;
    if hseq.last_time().is_some_and(|t| t > series.len()) {
        bail!(
            "entropy file reaches t = {} but the series has {} rows",
            hseq.last_time().unwrap_or(0),
            series.len()
        );
    }
    formats::write_joined_csv(&series, &hseq, create(&args.output)?)
        .with_context(|| format!("writing {}", args.output.display()))?;
    Ok(())
}

fn read_series(path: &Path) -> Result<crate::sliding::Series> {
    formats::read_series_csv(open(path)?)
        .with_context(|| format!("reading series CSV {}", path.display()))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).with_context(|| format!("opening {}", path.display()))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).with_context(|| format!("creating {}", path.display()))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
