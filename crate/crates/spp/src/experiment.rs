//! Seeded Monte Carlo experiment harness.
//!
//! A run draws `trials` random instances — sizes uniform over the
//! configured ranges, graph and profile from the configured families —
//! executes every selected algorithm on each, and aggregates welfare into
//! four CSV artifacts:
//!
//! * `trials.csv` — one row per (trial, algorithm);
//! * `by_L.csv` / `by_S.csv` — mean welfare per cell count / channel
//!   count and algorithm (figure data);
//! * `summary.csv` — mean welfare, stability rate, and (for the
//!   propose-and-reject solver) non-convergence rate per algorithm
//!   (table data).
//!
//! Reproducibility is the point: every trial derives its randomness
//! solely from `(seed, trial index)` via [`crate::rng::substream`], so a
//! run is byte-identical across repeats and worker counts, and any single
//! trial can be regenerated in isolation. Each CSV opens with a comment
//! line carrying a digest of the generating configuration so artifacts
//! can be traced back to their parameters. Wall-clock timings are kept in
//! the in-memory report only — they are the one non-deterministic
//! quantity, and writing them to the artifacts would break the
//! byte-identity guarantee.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use sha2::{Digest, Sha256};

use crate::algo;
use crate::error::{Result, SppError};
use crate::exec;
use crate::gen::{self, GenConfig, GraphKind, ProfileKind};
use crate::io::format_f64;
use crate::metrics::{welfare_report, welfare_value, WelfareReport};
use crate::model::{Instance, Matching};
use crate::rng;
use crate::stability::is_stable;

/// The algorithms the harness can run per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Dssar,
    Rpr,
    Random,
    BestOfRandom,
    TopRanked,
    Optimal,
}

impl Algorithm {
    /// Stable identifier used in CSV rows and config files.
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dssar => "dssar",
            Algorithm::Rpr => "rpr",
            Algorithm::Random => "random",
            Algorithm::BestOfRandom => "best_of_random",
            Algorithm::TopRanked => "top_ranked",
            Algorithm::Optimal => "optimal",
        }
    }
}

fn default_oracle_cap() -> u64 {
    algo::DEFAULT_ORACLE_CAP
}

/// Full description of one experiment. Serializes to/from the JSON config
/// files the CLI consumes.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Number of independent trials.
    pub trials: usize,
    /// Inclusive range the cell count is drawn from, `[min, max]`.
    pub l_range: (usize, usize),
    /// Inclusive range the channel count (virtual included) is drawn
    /// from, `[min, max]`.
    pub s_range: (usize, usize),
    /// Constraint-graph family.
    pub graph: GraphKind,
    /// Preference-profile family.
    pub profile: ProfileKind,
    /// Algorithms to run on every trial, in reporting order.
    pub algorithms: Vec<Algorithm>,
    /// Master seed; all per-trial randomness derives from it.
    pub seed: u64,
    /// Bound on `S^L` for the exhaustive oracle.
    #[serde(default = "default_oracle_cap")]
    pub oracle_cap: u64,
    /// Outer-pass budget for the propose-and-reject solver; default `L·S`
    /// per trial.
    #[serde(default)]
    pub rpr_passes: Option<usize>,
    /// Attempts for best-of-random; default `L` per trial.
    #[serde(default)]
    pub best_of_random_repeats: Option<usize>,
    /// Where the CLI writes the CSV artifacts. Not part of the config
    /// digest: it locates artifacts without affecting their content.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Rejects configurations that could only fail mid-run.
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(SppError::Config("need at least one trial".into()));
        }
        let (l_min, l_max) = self.l_range;
        if l_min < 1 || l_min > l_max {
            return Err(SppError::Config(format!(
                "cell-count range [{l_min}, {l_max}] is empty or starts below 1"
            )));
        }
        let (s_min, s_max) = self.s_range;
        if s_min < 2 || s_min > s_max {
            return Err(SppError::Config(format!(
                "channel-count range [{s_min}, {s_max}] is empty or starts below 2 \
                 (one real channel plus the virtual one)"
            )));
        }
        if self.algorithms.is_empty() {
            return Err(SppError::Config("no algorithms selected".into()));
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].contains(a) {
                return Err(SppError::Config(format!(
                    "algorithm {} listed twice",
                    a.name()
                )));
            }
        }
        let ranking = matches!(self.profile, ProfileKind::RankingUniform);
        if ranking && self.algorithms.contains(&Algorithm::Dssar) {
            return Err(SppError::Config(
                "dssar needs utility profiles; the config generates rankings".into(),
            ));
        }
        if !ranking && self.algorithms.contains(&Algorithm::Rpr) {
            return Err(SppError::Config(
                "rpr needs ranking profiles; the config generates utilities".into(),
            ));
        }
        if self.algorithms.contains(&Algorithm::Optimal) {
            let worst = (s_max as u128).checked_pow(l_max as u32);
            match worst {
                Some(n) if n <= u128::from(self.oracle_cap) => {}
                _ => {
                    return Err(SppError::Config(format!(
                        "optimal is selected but the worst-case assignment space \
                         {s_max}^{l_max} exceeds the oracle cap of {}",
                        self.oracle_cap
                    )));
                }
            }
        }
        // Families with a fixed shape must pin the cell count they imply.
        match &self.graph {
            GraphKind::DisjointCliques { sizes } => {
                let total: usize = sizes.iter().sum();
                if (l_min, l_max) != (total, total) {
                    return Err(SppError::Config(format!(
                        "clique sizes sum to {total}; the cell-count range must be \
                         exactly [{total}, {total}]"
                    )));
                }
            }
            GraphKind::Explicit { .. } => {
                if l_min != l_max {
                    return Err(SppError::Config(
                        "an explicit edge list needs a fixed cell count".into(),
                    ));
                }
            }
            _ => {}
        }
        // Shake out family parameter errors (radius range, edge bounds)
        // once, instead of once per trial.
        GenConfig {
            seed: 0,
            num_cells: l_min,
            num_channels: s_min,
            graph: self.graph.clone(),
            profile: self.profile.clone(),
        }
        .validate()
    }

    /// Hex digest identifying the data-generating parameters. The output
    /// directory is excluded: two runs of the same experiment into
    /// different places must produce identical artifacts.
    pub fn digest(&self) -> String {
        let mut canonical = self.clone();
        canonical.output_dir = None;
        let json = serde_json::to_string(&canonical).expect("config serializes");
        let hash = Sha256::digest(json.as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in hash {
            write!(hex, "{byte:02x}").expect("writing to a string cannot fail");
        }
        hex
    }
}

/// Outcome of one algorithm on one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgoResult {
    pub algorithm: Algorithm,
    pub matching: Matching,
    pub report: WelfareReport,
    /// The scalar the aggregates average: normalized total welfare for
    /// ranking instances, sum rate for utility instances.
    pub welfare: f64,
    pub stable: bool,
    /// Assignment steps (greedy) or outer passes (propose-and-reject).
    pub iterations: Option<usize>,
    /// Fixed-point flag; propose-and-reject only.
    pub converged: Option<bool>,
    /// In-memory only; never written to artifacts.
    pub wall_time_ns: u128,
}

/// Everything recorded about one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    /// 1-based trial index; also the RNG substream index.
    pub trial: usize,
    pub num_cells: usize,
    pub num_channels: usize,
    /// One entry per configured algorithm, in configuration order.
    pub results: Vec<AlgoResult>,
}

/// Per-algorithm aggregate over all trials.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub n_trials: usize,
    pub mean_welfare: f64,
    pub stable_rate: f64,
    /// Fraction of trials that hit the pass budget without reaching a
    /// fixed point; propose-and-reject only.
    pub nonconvergence_rate: Option<f64>,
}

/// Mean welfare over the trials sharing one size key.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupMean {
    pub key: usize,
    pub algorithm: Algorithm,
    pub n_trials: usize,
    pub mean_welfare: f64,
}

/// Full experiment outcome: per-trial records plus the aggregates the
/// CSV artifacts are rendered from.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub config_digest: String,
    pub records: Vec<TrialRecord>,
    pub summary: Vec<AlgorithmSummary>,
    pub by_cells: Vec<GroupMean>,
    pub by_channels: Vec<GroupMean>,
}

fn run_algorithm(
    algorithm: Algorithm,
    inst: &Instance,
    config: &ExperimentConfig,
    random_seed: u64,
    bor_seed: u64,
) -> Result<AlgoResult> {
    let started = Instant::now();
    let (matching, stable, iterations, converged) = match algorithm {
        Algorithm::Dssar => {
            let (matching, order) = algo::dssar_with_order(inst)?;
            let stable = is_stable(inst, &matching);
            (matching, stable, Some(order.len()), None)
        }
        Algorithm::Rpr => {
            let passes = config
                .rpr_passes
                .unwrap_or(inst.num_cells() * inst.num_channels());
            let outcome = algo::rpr(inst, passes)?;
            (
                outcome.matching,
                outcome.stable,
                Some(outcome.iterations_used),
                Some(outcome.converged),
            )
        }
        Algorithm::Random => {
            let matching = algo::random_matching(inst, random_seed);
            let stable = is_stable(inst, &matching);
            (matching, stable, None, None)
        }
        Algorithm::BestOfRandom => {
            let repeats = config.best_of_random_repeats.unwrap_or(inst.num_cells());
            let matching = algo::best_of_random(inst, bor_seed, repeats)?;
            let stable = is_stable(inst, &matching);
            (matching, stable, None, None)
        }
        Algorithm::TopRanked => {
            let matching = algo::top_ranked_proposal(inst);
            let stable = is_stable(inst, &matching);
            (matching, stable, None, None)
        }
        Algorithm::Optimal => {
            let result = algo::exhaustive_optimal_welfare_with_cap(inst, config.oracle_cap)?;
            let matching = result
                .best_matching
                .expect("the all-virtual assignment is always harmonious");
            let stable = is_stable(inst, &matching);
            (matching, stable, None, None)
        }
    };
    Ok(AlgoResult {
        algorithm,
        report: welfare_report(inst, &matching),
        welfare: welfare_value(inst, &matching),
        stable,
        iterations,
        converged,
        wall_time_ns: started.elapsed().as_nanos(),
        matching,
    })
}

/// Runs one trial. `trial` is 1-based; it doubles as the RNG substream
/// index, which is why everything the trial does is reproducible from
/// `(config.seed, trial)` alone.
fn run_trial(config: &ExperimentConfig, trial: usize) -> Result<TrialRecord> {
    let mut trial_rng = rng::substream(config.seed, trial as u64);
    let num_cells = trial_rng.gen_range(config.l_range.0..=config.l_range.1);
    let num_channels = trial_rng.gen_range(config.s_range.0..=config.s_range.1);
    // Drawn unconditionally so the generated instance does not depend on
    // which algorithms are selected.
    let graph_seed = trial_rng.gen::<u64>();
    let profile_seed = trial_rng.gen::<u64>();
    let random_seed = trial_rng.gen::<u64>();
    let bor_seed = trial_rng.gen::<u64>();

    let shape = |seed: u64| GenConfig {
        seed,
        num_cells,
        num_channels,
        graph: config.graph.clone(),
        profile: config.profile.clone(),
    };
    let graph = gen::generate_graph(&shape(graph_seed))?;
    let profile = gen::generate_profile(&shape(profile_seed))?;
    let inst = Instance::new(graph, profile)?;

    let results = config
        .algorithms
        .iter()
        .map(|&algorithm| run_algorithm(algorithm, &inst, config, random_seed, bor_seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialRecord {
        trial,
        num_cells,
        num_channels,
        results,
    })
}

/// Aggregates are computed sequentially in trial order so the sums are
/// bit-identical no matter how the trials themselves were scheduled.
fn aggregate(config: &ExperimentConfig, records: &[TrialRecord]) -> ExperimentReport {
    let mut summary = Vec::with_capacity(config.algorithms.len());
    for (slot, &algorithm) in config.algorithms.iter().enumerate() {
        let mut welfare_sum = 0.0;
        let mut stable_count = 0usize;
        let mut nonconverged = 0usize;
        for record in records {
            let result = &record.results[slot];
            welfare_sum += result.welfare;
            stable_count += usize::from(result.stable);
            nonconverged += usize::from(result.converged == Some(false));
        }
        let n = records.len();
        summary.push(AlgorithmSummary {
            algorithm,
            n_trials: n,
            mean_welfare: welfare_sum / n as f64,
            stable_rate: stable_count as f64 / n as f64,
            nonconvergence_rate: (algorithm == Algorithm::Rpr)
                .then(|| nonconverged as f64 / n as f64),
        });
    }

    let group = |key: fn(&TrialRecord) -> usize| -> Vec<GroupMean> {
        let mut sums: BTreeMap<usize, Vec<(f64, usize)>> = BTreeMap::new();
        for record in records {
            let entry = sums
                .entry(key(record))
                .or_insert_with(|| vec![(0.0, 0); config.algorithms.len()]);
            for (slot, result) in record.results.iter().enumerate() {
                entry[slot].0 += result.welfare;
                entry[slot].1 += 1;
            }
        }
        let mut rows = Vec::new();
        for (key, per_algo) in sums {
            for (slot, &(sum, n)) in per_algo.iter().enumerate() {
                rows.push(GroupMean {
                    key,
                    algorithm: config.algorithms[slot],
                    n_trials: n,
                    mean_welfare: sum / n as f64,
                });
            }
        }
        rows
    };

    ExperimentReport {
        config: config.clone(),
        config_digest: config.digest(),
        by_cells: group(|r| r.num_cells),
        by_channels: group(|r| r.num_channels),
        summary,
        records: records.to_vec(),
    }
}

/// Runs the full experiment, scheduling trials on the worker pool when
/// the `parallel` feature is active.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let outcomes = exec::map_indexed(config.trials, |i| run_trial(config, i + 1));
    let records = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(aggregate(config, &records))
}

/// Strictly sequential sibling of [`run_experiment`]; benchmark partner
/// and equivalence witness.
pub fn run_experiment_seq(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let outcomes = exec::map_indexed_seq(config.trials, |i| run_trial(config, i + 1));
    let records = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(aggregate(config, &records))
}

fn optional_float(value: Option<f64>) -> String {
    value.map(format_f64).unwrap_or_default()
}

fn optional_count(value: Option<usize>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

impl ExperimentReport {
    fn provenance_line(&self) -> String {
        format!("# spp experiment schema=1 config_digest={}\n", self.config_digest)
    }

    fn trials_csv(&self) -> String {
        let mut out = self.provenance_line();
        out.push_str(
            "trial,L,S,algorithm,matched,s_welfare_raw,l_welfare_raw,s_welfare_norm,\
             l_welfare_norm,total_welfare_norm,sum_rate,welfare_value,stable,iterations,\
             converged\n",
        );
        for record in &self.records {
            for result in &record.results {
                let ranking = result.report.ranking.as_ref();
                let converged = match result.converged {
                    Some(flag) => flag.to_string(),
                    None => String::new(),
                };
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    record.trial,
                    record.num_cells,
                    record.num_channels,
                    result.algorithm.name(),
                    result.report.matched_count,
                    optional_float(ranking.map(|r| r.s_welfare_raw)),
                    optional_float(ranking.map(|r| r.l_welfare_raw)),
                    optional_float(ranking.map(|r| r.s_welfare_norm)),
                    optional_float(ranking.map(|r| r.l_welfare_norm)),
                    optional_float(ranking.map(|r| r.total_welfare_norm)),
                    optional_float(result.report.sum_rate),
                    format_f64(result.welfare),
                    result.stable,
                    optional_count(result.iterations),
                    converged,
                ));
            }
        }
        out
    }

    fn group_csv(&self, key_name: &str, rows: &[GroupMean]) -> String {
        let mut out = self.provenance_line();
        out.push_str(&format!("{key_name},algorithm,n_trials,mean_welfare\n"));
        for row in rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.key,
                row.algorithm.name(),
                row.n_trials,
                format_f64(row.mean_welfare),
            ));
        }
        out
    }

    fn summary_csv(&self) -> String {
        let mut out = self.provenance_line();
        out.push_str("algorithm,n_trials,mean_welfare,stable_rate,nonconvergence_rate\n");
        for row in &self.summary {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.algorithm.name(),
                row.n_trials,
                format_f64(row.mean_welfare),
                format_f64(row.stable_rate),
                optional_float(row.nonconvergence_rate),
            ));
        }
        out
    }

    /// Writes the four CSV artifacts into `dir`, creating it if needed.
    /// Returns the paths written.
    pub fn write_csvs(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| SppError::io(dir, e))?;
        let artifacts = [
            ("trials.csv", self.trials_csv()),
            ("by_L.csv", self.group_csv("L", &self.by_cells)),
            ("by_S.csv", self.group_csv("S", &self.by_channels)),
            ("summary.csv", self.summary_csv()),
        ];
        let mut written = Vec::with_capacity(artifacts.len());
        for (name, content) in artifacts {
            let path = dir.join(name);
            fs::write(&path, content).map_err(|e| SppError::io(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}
