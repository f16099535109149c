//! Command-line front end for the stable-polygamy matching library.
//!
//! Subcommands: `gen` (seeded instance generation), `solve` (run one
//! algorithm on an instance file), `verify` (check a matching file;
//! exit 0 iff stable), `simulate` (distributed CSMA event trace),
//! `experiment` (Monte Carlo harness emitting CSV artifacts), and
//! `counterexample` (sweep for unsolvable constraint graphs).
//!
//! Data goes to `--output` files or standard output; diagnostics and
//! human-readable summaries go to standard error. Every randomized
//! command takes `--seed`; when omitted, the `SPP_SEED` environment
//! variable overrides the built-in default seed of 0.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use spp::algo;
use spp::counterexample::counterexample_search;
use spp::experiment::{run_experiment, ExperimentConfig};
use spp::gen::{GenConfig, GraphKind, ProfileKind};
use spp::io::{
    format_f64, instance_to_json, load_instance, load_matching, matching_to_json, save_matching,
};
use spp::metrics::welfare_value;
use spp::sim::{simulate_csma, EventKind, SimMode};
use spp::stability::{is_stable, stability_diagnostic, StabilityVerdict};
use spp::{Instance, Matching};

#[derive(Parser)]
#[command(
    name = "spp",
    version,
    about = "Stable polygamy matching for spectrum access with channel reuse"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Run one algorithm on an instance file and emit the matching.
    Solve(SolveArgs),
    /// Check a matching file against its instance; exit 0 iff stable.
    Verify(VerifyArgs),
    /// Simulate distributed channel access and emit the event trace.
    Simulate(SimulateArgs),
    /// Run a Monte Carlo experiment from a JSON config, emitting CSVs.
    Experiment(ExperimentArgs),
    /// Sweep all 5-cell graphs for instances with no stable matching.
    Counterexample(CounterexampleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphArg {
    Geometric,
    Empty,
    Complete,
    Cliques,
    Forest,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Ranking,
    Utility,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Dssar,
    Rpr,
    Random,
    BestOfRandom,
    TopRanked,
    Optimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Carrier-sense backoff.
    Csma,
    /// Explicit control messages.
    Messages,
}

#[derive(Args)]
struct GenArgs {
    /// Number of cells, L.
    #[arg(long)]
    cells: usize,
    /// Number of channels including the virtual one, S.
    #[arg(long)]
    channels: usize,
    /// Constraint-graph family.
    #[arg(long, value_enum, default_value_t = GraphArg::Geometric)]
    graph: GraphArg,
    /// Geometric-graph connection radius.
    #[arg(long, default_value_t = 0.3)]
    radius: f64,
    /// Comma-separated clique sizes (graph = cliques), e.g. 3,3,4.
    #[arg(long)]
    cliques: Option<String>,
    /// Preference-profile family.
    #[arg(long, value_enum, default_value_t = ProfileArg::Utility)]
    profile: ProfileArg,
    /// Mean SNR in dB for Shannon-rate utilities.
    #[arg(long, default_value_t = 10.0)]
    snr_db: f64,
    /// Generation seed (default 0, overridable via SPP_SEED).
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (standard output when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Algorithm to run.
    #[arg(long, value_enum)]
    alg: AlgArg,
    /// Instance file.
    #[arg(short, long)]
    instance: PathBuf,
    /// Matching output file (standard output when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Seed for the randomized algorithms (default 0 / SPP_SEED).
    #[arg(long)]
    seed: Option<u64>,
    /// Outer-pass budget for rpr (default L·S).
    #[arg(long)]
    passes: Option<usize>,
    /// Attempts for best-of-random (default L).
    #[arg(long)]
    repeats: Option<usize>,
    /// Enumeration cap on S^L for optimal.
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file.
    #[arg(short, long)]
    instance: PathBuf,
    /// Matching file to check.
    #[arg(short, long)]
    matching: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Cancellation mechanism.
    #[arg(long, value_enum, default_value_t = ModeArg::Csma)]
    mode: ModeArg,
    /// Instance file (utility profile).
    #[arg(short, long)]
    instance: PathBuf,
    /// Trace CSV output (standard output when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the final matching to this file.
    #[arg(long)]
    matching_out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for the CSV artifacts (overrides the config's
    /// output_dir; default "experiment_out").
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CounterexampleArgs {
    /// Report output (standard output when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen(args) => gen(args),
        Command::Solve(args) => solve(args),
        Command::Verify(args) => verify(args),
        Command::Simulate(args) => simulate(args),
        Command::Experiment(args) => experiment(args),
        Command::Counterexample(args) => counterexample(args),
    }
}

/// `--seed` beats `SPP_SEED` beats 0. Only the default is overridable
/// from the environment; explicit flags and config files stay exact.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("SPP_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .with_context(|| format!("SPP_SEED is set but not a valid seed: {text:?}")),
        Err(_) => Ok(0),
    }
}

/// Writes `content` to the file, or to standard output when none given.
fn emit(output: Option<&Path>, content: &str) -> Result<()> {
    let text = if content.ends_with('\n') {
        content.to_string()
    } else {
        format!("{content}\n")
    };
    match output {
        Some(path) => std::fs::write(path, &text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn gen(args: GenArgs) -> Result<ExitCode> {
    let graph = match args.graph {
        GraphArg::Geometric => GraphKind::Geometric {
            radius: args.radius,
        },
        GraphArg::Empty => GraphKind::Empty,
        GraphArg::Complete => GraphKind::Complete,
        GraphArg::Cliques => {
            let text = args
                .cliques
                .as_deref()
                .context("--graph cliques needs --cliques SIZES")?;
            let sizes = text
                .split(',')
                .map(|part| part.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .with_context(|| format!("bad clique sizes {text:?}"))?;
            GraphKind::DisjointCliques { sizes }
        }
        GraphArg::Forest => GraphKind::RandomForest,
    };
    let profile = match args.profile {
        ProfileArg::Ranking => ProfileKind::RankingUniform,
        ProfileArg::Utility => ProfileKind::UtilityShannon {
            snr_db: args.snr_db,
        },
    };
    let config = GenConfig {
        seed: resolve_seed(args.seed)?,
        num_cells: args.cells,
        num_channels: args.channels,
        graph,
        profile,
    };
    let inst = spp::gen::generate_instance(&config)?;
    emit(args.output.as_deref(), &instance_to_json(&inst))?;
    Ok(ExitCode::SUCCESS)
}

fn describe(inst: &Instance, matching: &Matching) -> String {
    format!(
        "matched {} of {} cells, welfare {}, stable: {}",
        matching.matched_count(),
        inst.num_cells(),
        format_f64(welfare_value(inst, matching)),
        is_stable(inst, matching),
    )
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let inst = load_instance(&args.instance)?;
    let seed = resolve_seed(args.seed)?;
    let matching = match args.alg {
        AlgArg::Dssar => algo::dssar(&inst)?,
        AlgArg::Rpr => {
            let passes = args
                .passes
                .unwrap_or_else(|| algo::default_rpr_passes(&inst));
            let outcome = algo::rpr(&inst, passes)?;
            eprintln!(
                "rpr: {} of {passes} passes used, converged: {}",
                outcome.iterations_used, outcome.converged
            );
            outcome.matching
        }
        AlgArg::Random => algo::random_matching(&inst, seed),
        AlgArg::BestOfRandom => {
            let repeats = args.repeats.unwrap_or_else(|| inst.num_cells());
            algo::best_of_random(&inst, seed, repeats)?
        }
        AlgArg::TopRanked => algo::top_ranked_proposal(&inst),
        AlgArg::Optimal => {
            let cap = args.cap.unwrap_or(algo::DEFAULT_ORACLE_CAP);
            let result = algo::exhaustive_optimal_welfare_with_cap(&inst, cap)?;
            result
                .best_matching
                .context("enumeration found no harmonious assignment; this cannot happen")?
        }
    };
    eprintln!("{}", describe(&inst, &matching));
    emit(args.output.as_deref(), &matching_to_json(&matching))?;
    Ok(ExitCode::SUCCESS)
}

/// Renders a verdict witness with 1-based indices, matching the file
/// formats.
fn witness(verdict: &StabilityVerdict) -> String {
    match verdict {
        StabilityVerdict::Stable => "stable".into(),
        StabilityVerdict::NotHarmonious {
            cell_a,
            cell_b,
            channel,
        } => format!(
            "cells {} and {} conflict but share channel {}",
            cell_a + 1,
            cell_b + 1,
            channel + 1
        ),
        StabilityVerdict::Blocking { cell, channel } => format!(
            "cell {} would defect to available channel {}",
            cell + 1,
            channel + 1
        ),
    }
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let inst = load_instance(&args.instance)?;
    let matching = match load_matching(&args.matching, &inst) {
        Ok(matching) => {
            println!("admissible: true");
            matching
        }
        Err(err) => {
            println!("admissible: false — {err}");
            return Ok(ExitCode::FAILURE);
        }
    };
    let verdict = stability_diagnostic(&inst, &matching);
    match &verdict {
        StabilityVerdict::NotHarmonious { .. } => {
            println!("harmonious: false — {}", witness(&verdict));
            println!("stable: false");
        }
        StabilityVerdict::Blocking { .. } => {
            println!("harmonious: true");
            println!("stable: false — {}", witness(&verdict));
        }
        StabilityVerdict::Stable => {
            println!("harmonious: true");
            println!("stable: true");
        }
    }
    Ok(if verdict.is_stable() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn simulate(args: SimulateArgs) -> Result<ExitCode> {
    let inst = load_instance(&args.instance)?;
    let mode = match args.mode {
        ModeArg::Csma => SimMode::CarrierSense,
        ModeArg::Messages => SimMode::ControlMessages,
    };
    let trace = simulate_csma(&inst, mode)?;
    let mut csv = String::from("time,kind,cell,channel\n");
    for event in &trace.events {
        let kind = match event.kind {
            EventKind::Transmit => "transmit",
            EventKind::SenseBusy => "sense_busy",
            EventKind::ControlMessage => "control_message",
        };
        csv.push_str(&format!(
            "{},{},{},{}\n",
            format_f64(event.time),
            kind,
            event.cell + 1,
            event.channel + 1
        ));
    }
    eprintln!(
        "{} events; final: {}",
        trace.events.len(),
        describe(&inst, &trace.final_matching)
    );
    emit(args.output.as_deref(), &csv)?;
    if let Some(path) = &args.matching_out {
        save_matching(&trace.final_matching, path)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn experiment(args: ExperimentArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let config: ExperimentConfig = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", args.config.display()))?;
    let out_dir = args
        .out
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("experiment_out"));
    let report = run_experiment(&config)?;
    let written = report.write_csvs(&out_dir)?;
    eprintln!(
        "{} trials, config digest {}",
        config.trials, report.config_digest
    );
    for row in &report.summary {
        let extra = match row.nonconvergence_rate {
            Some(rate) => format!(", nonconvergence rate {rate:.4}"),
            None => String::new(),
        };
        eprintln!(
            "  {:>14}: mean welfare {:.6}, stable rate {:.4}{extra}",
            row.algorithm.name(),
            row.mean_welfare,
            row.stable_rate
        );
    }
    for path in written {
        println!("{}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn counterexample(args: CounterexampleArgs) -> Result<ExitCode> {
    let report = counterexample_search()?;
    let mut out = String::new();
    out.push_str(&format!(
        "unsolvable graphs under the fixed 5-cell, 2-real-channel profile: {}\n",
        report.unsolvable.len()
    ));
    for (i, graph) in report.unsolvable.iter().enumerate() {
        let edges: Vec<String> = graph
            .undirected_edges()
            .into_iter()
            .map(|(a, b)| format!("({},{})", a + 1, b + 1))
            .collect();
        out.push_str(&format!("graph {}: {}\n", i + 1, edges.join(" ")));
    }
    out.push_str(&format!(
        "\nrefutation of graph 1 — all {} assignments (1-based channels, \
         3 = virtual):\n",
        report.refutation.len()
    ));
    for refuted in &report.refutation {
        let assignment: Vec<String> = refuted
            .assignment
            .iter()
            .map(|s| (s + 1).to_string())
            .collect();
        out.push_str(&format!(
            "({}): {}\n",
            assignment.join(","),
            witness(&refuted.verdict)
        ));
    }
    emit(args.output.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}
