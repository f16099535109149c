//! Acceptance suite: one test per shipping criterion.
//!
//! Every test prints a single `[acceptance NN] ...: PASS` line (visible
//! under `--nocapture`) or panics with the matching FAIL line. All
//! randomness derives from one base seed so the whole suite is a fixed,
//! reviewable computation: reruns are bit-identical, and a failure is a
//! reproducible finding rather than flakiness.

use std::time::Instant;

use rand::Rng;

use spp::algo::{
    best_of_random, dssar, dssar_with_order, exhaustive_optimal_welfare,
    exhaustive_stable_search, gale_shapley_reference, random_matching, rpr, top_ranked_proposal,
    DEFAULT_ORACLE_CAP,
};
use spp::counterexample::counterexample_search;
use spp::experiment::{run_experiment, run_experiment_seq, Algorithm, ExperimentConfig};
use spp::gen::{generate_instance, GenConfig, GraphKind, ProfileKind};
use spp::graph::ConstraintGraph;
use spp::io::instance_to_json;
use spp::metrics::welfare_value;
use spp::model::{Instance, Profile, RankingProfile};
use spp::rng::{child_seed, substream};
use spp::stability::{is_harmonious, is_stable};

/// Base seed for the whole suite, fixed in advance of any runs.
const BASE_SEED: u64 = 20_260_822;

/// Per-criterion, per-trial seed stream.
fn trial_rng(criterion: u64, trial: u64) -> rand_chacha::ChaCha8Rng {
    substream(child_seed(BASE_SEED, criterion), trial)
}

fn pass(number: u32, what: &str, detail: &str) {
    println!("[acceptance {number:02}] {what}: PASS ({detail})");
}

/// Criterion 1: the greedy utility solver returns a harmonious, stable
/// matching on every one of 10,000 random geometric instances, within a
/// 30-second budget.
#[test]
fn a01_greedy_solver_always_stable_on_random_geometric_instances() {
    let start = Instant::now();
    for trial in 1..=10_000u64 {
        let mut rng = trial_rng(1, trial);
        let config = GenConfig {
            seed: rng.gen(),
            num_cells: rng.gen_range(3..=100),
            num_channels: rng.gen_range(2..=10),
            graph: GraphKind::Geometric { radius: 0.5 },
            profile: ProfileKind::UtilityShannon { snr_db: 10.0 },
        };
        let inst = generate_instance(&config).unwrap();
        let matching = dssar(&inst).unwrap();
        assert!(
            is_harmonious(&inst, &matching) && is_stable(&inst, &matching),
            "[acceptance 01] greedy solver stability: FAIL (trial {trial}, config {config:?})"
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "[acceptance 01] greedy solver stability: FAIL (runtime {elapsed:?} over 30s budget)"
    );
    pass(
        1,
        "greedy solver stable on 10,000 geometric instances",
        &format!("{elapsed:.2?}"),
    );
}

/// Criterion 2: the distributed channel-access simulation reproduces the
/// greedy solver exactly — same final matching, same transmit order — in
/// both cancellation modes, on 1,000 instances.
#[test]
fn a02_distributed_simulation_reproduces_the_greedy_solver() {
    use spp::sim::{simulate_csma, SimMode};
    for trial in 1..=1_000u64 {
        let mut rng = trial_rng(2, trial);
        let config = GenConfig {
            seed: rng.gen(),
            num_cells: rng.gen_range(3..=30),
            num_channels: rng.gen_range(2..=10),
            graph: GraphKind::Geometric { radius: 0.5 },
            profile: ProfileKind::UtilityShannon { snr_db: 10.0 },
        };
        let inst = generate_instance(&config).unwrap();
        let (expected, order) = dssar_with_order(&inst).unwrap();
        for mode in [SimMode::CarrierSense, SimMode::ControlMessages] {
            let trace = simulate_csma(&inst, mode).unwrap();
            assert!(
                trace.final_matching == expected && trace.transmit_order() == order,
                "[acceptance 02] simulation equivalence: FAIL (trial {trial}, mode {mode:?})"
            );
        }
    }
    pass(
        2,
        "simulation matches greedy solver on 1,000 instances in both modes",
        "matching and transmit order identical",
    );
}

/// Criterion 3: on constraint-free instances a single outer pass leaves
/// every cell on its first-ranked channel, and the result is stable.
#[test]
fn a03_single_pass_suffices_on_empty_graphs() {
    for trial in 1..=1_000u64 {
        let mut rng = trial_rng(3, trial);
        let config = GenConfig {
            seed: rng.gen(),
            num_cells: rng.gen_range(3..=30),
            num_channels: rng.gen_range(2..=10),
            graph: GraphKind::Empty,
            profile: ProfileKind::RankingUniform,
        };
        let inst = generate_instance(&config).unwrap();
        let outcome = rpr(&inst, 1).unwrap();
        let ranks = match inst.profile() {
            Profile::Ranking(p) => p,
            Profile::Utility(_) => unreachable!("ranking config"),
        };
        let all_top = outcome
            .matching
            .assignment()
            .iter()
            .enumerate()
            .all(|(l, &s)| ranks.cell_rank(l, s) == 1);
        assert!(
            all_top && outcome.stable,
            "[acceptance 03] single pass on empty graphs: FAIL (trial {trial})"
        );
    }
    pass(
        3,
        "one pass yields every cell's first choice on 1,000 empty-graph instances",
        "all stable",
    );
}

/// Criterion 4: on complete graphs with one channel per cell plus the
/// virtual channel, a pass budget equal to the cell count reaches the
/// deferred-acceptance matching, stably, on 1,000 instances.
///
/// The pass budget is exactly the claimed bound with no headroom; the
/// solver's own tests hold a frozen instance where that bound stalls one
/// pass short, so this criterion is exposed to a small per-trial risk
/// rather than smoothed over with extra passes.
#[test]
fn a04_complete_graphs_match_deferred_acceptance_within_cell_count_passes() {
    for trial in 1..=1_000u64 {
        let mut rng = trial_rng(4, trial);
        let num_cells = rng.gen_range(2..=8);
        let config = GenConfig {
            seed: rng.gen(),
            num_cells,
            num_channels: num_cells + 1,
            graph: GraphKind::Complete,
            profile: ProfileKind::RankingUniform,
        };
        let inst = generate_instance(&config).unwrap();
        let outcome = rpr(&inst, num_cells).unwrap();
        let reference = gale_shapley_reference(&inst).unwrap();
        assert!(
            outcome.stable && outcome.matching == reference,
            "[acceptance 04] complete-graph bound: FAIL (trial {trial}, L={num_cells}, \
             stable={}, instance {})",
            outcome.stable,
            instance_to_json(&inst)
        );
    }
    pass(
        4,
        "cell-count passes recover deferred acceptance on 1,000 complete graphs",
        "all stable and equal to the reference",
    );
}

/// Restriction of a ranking instance to one clique of a disjoint-clique
/// graph: same cell rows, channel columns re-ranked over the kept cells.
fn clique_subinstance(inst: &Instance, component: &[usize]) -> Instance {
    let ranks = match inst.profile() {
        Profile::Ranking(p) => p,
        Profile::Utility(_) => unreachable!("ranking instances only"),
    };
    let num_channels = inst.num_channels();
    let cell_ranks: Vec<Vec<u32>> = component
        .iter()
        .map(|&c| ranks.cell_ranks()[c].clone())
        .collect();
    let channel_ranks: Vec<Vec<u32>> = component
        .iter()
        .map(|&c| {
            (0..num_channels)
                .map(|s| {
                    if s == inst.virtual_channel() {
                        // The virtual column stays the identity permutation.
                        component.iter().position(|&x| x == c).unwrap() as u32 + 1
                    } else {
                        let mine = ranks.channel_rank(c, s);
                        let better = component
                            .iter()
                            .filter(|&&other| ranks.channel_rank(other, s) < mine)
                            .count();
                        better as u32 + 1
                    }
                })
                .collect()
        })
        .collect();
    let graph = ConstraintGraph::complete(component.len());
    let profile = Profile::Ranking(RankingProfile::new(cell_ranks, channel_ranks).unwrap());
    Instance::new(graph, profile).unwrap()
}

/// Smallest pass budget that reaches stability, for failure forensics.
fn minimal_stabilizing_passes(inst: &Instance, from: usize) -> Option<usize> {
    (from..=inst.num_cells() * inst.num_channels())
        .find(|&t| rpr(inst, t).unwrap().stable)
}

/// Criterion 5: on disjoint-clique graphs, a pass budget equal to the
/// largest clique reaches stability, and the matching restricted to each
/// clique equals a standalone run on that clique alone.
///
/// Every trial is scanned and every stability failure is logged in full
/// (with the smallest budget that does stabilize it) before the verdict,
/// so a red run documents the complete set of findings.
#[test]
fn a05_disjoint_cliques_solve_componentwise_within_largest_clique_passes() {
    let mut failures = 0u32;
    for trial in 1..=1_000u64 {
        let mut rng = trial_rng(5, trial);
        let clique_count = rng.gen_range(2..=4);
        let sizes: Vec<usize> = (0..clique_count).map(|_| rng.gen_range(1..=6)).collect();
        let num_cells: usize = sizes.iter().sum();
        let passes = *sizes.iter().max().unwrap();
        let config = GenConfig {
            seed: rng.gen(),
            num_cells,
            num_channels: rng.gen_range(2..=6),
            graph: GraphKind::DisjointCliques { sizes },
            profile: ProfileKind::RankingUniform,
        };
        let inst = generate_instance(&config).unwrap();
        let outcome = rpr(&inst, passes).unwrap();
        if !outcome.stable {
            failures += 1;
            eprintln!(
                "[acceptance 05] FINDING: clique instance unstable after {passes} passes \
                 (trial {trial}; stabilizes at {:?} passes); full instance follows\n{}",
                minimal_stabilizing_passes(&inst, passes + 1),
                instance_to_json(&inst)
            );
        }
        // The componentwise claim is checked regardless of the stability
        // verdict: restriction must equal a standalone run either way.
        for mut component in inst.constraints().connected_components() {
            component.sort_unstable();
            let sub = clique_subinstance(&inst, &component);
            let standalone = rpr(&sub, passes).unwrap();
            for (i, &cell) in component.iter().enumerate() {
                assert_eq!(
                    outcome.matching.assignment()[cell],
                    standalone.matching.assignment()[i],
                    "[acceptance 05] disjoint cliques: FAIL (trial {trial}, cell {cell} \
                     differs from standalone clique run)"
                );
            }
        }
    }
    assert_eq!(
        failures, 0,
        "[acceptance 05] disjoint cliques: FAIL ({failures} of 1,000 trials unstable at the \
         largest-clique pass budget; see FINDING lines)"
    );
    pass(
        5,
        "largest-clique passes solve 1,000 disjoint-clique instances componentwise",
        "full runs equal standalone clique runs",
    );
}

/// Criterion 6: on random forests a pass budget equal to the cell count
/// reached stability in every one of 10,000 trials. A failure here is a
/// genuine finding — every failing instance is printed in full (with the
/// smallest budget that does stabilize it) before the verdict.
#[test]
fn a06_random_forests_always_reach_stability() {
    let mut failures = 0u32;
    for trial in 1..=10_000u64 {
        let mut rng = trial_rng(6, trial);
        let num_cells = rng.gen_range(2..=30);
        let config = GenConfig {
            seed: rng.gen(),
            num_cells,
            num_channels: rng.gen_range(2..=6),
            graph: GraphKind::RandomForest,
            profile: ProfileKind::RankingUniform,
        };
        let inst = generate_instance(&config).unwrap();
        let outcome = rpr(&inst, num_cells).unwrap();
        if !outcome.stable {
            failures += 1;
            eprintln!(
                "[acceptance 06] FINDING: forest instance not stable after {num_cells} passes \
                 (trial {trial}; stabilizes at {:?} passes); full instance follows\n{}",
                minimal_stabilizing_passes(&inst, num_cells + 1),
                instance_to_json(&inst)
            );
        }
    }
    assert_eq!(
        failures, 0,
        "[acceptance 06] random forests: FAIL ({failures} of 10,000 trials unstable at the \
         cell-count pass budget; see FINDING lines)"
    );
    pass(
        6,
        "cell-count passes reach stability on 10,000 random forests",
        "zero failures",
    );
}

/// Criterion 7: the counterexample search proves unsolvable instances
/// exist: it finds at least one non-empty constraint graph whose 243
/// assignments are all refuted, in under ten seconds.
#[test]
fn a07_unsolvable_instances_exist_and_are_found_quickly() {
    let start = Instant::now();
    let report = counterexample_search().unwrap();
    let elapsed = start.elapsed();
    assert!(
        !report.unsolvable.is_empty(),
        "[acceptance 07] counterexample search: FAIL (no unsolvable graph found)"
    );
    assert!(
        report.unsolvable.iter().all(|g| g.edge_count() > 0),
        "[acceptance 07] counterexample search: FAIL (empty graph in result set)"
    );
    assert_eq!(
        report.refutation.len(),
        243,
        "[acceptance 07] counterexample search: FAIL (refutation incomplete)"
    );
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "[acceptance 07] counterexample search: FAIL (runtime {elapsed:?} over 10s budget)"
    );
    pass(
        7,
        "unsolvable graphs found with full refutation",
        &format!("{} graphs, {elapsed:.2?}", report.unsolvable.len()),
    );
}

fn summary_mean(report: &spp::experiment::ExperimentReport, algorithm: Algorithm) -> f64 {
    report
        .summary
        .iter()
        .find(|s| s.algorithm == algorithm)
        .expect("algorithm present in summary")
        .mean_welfare
}

/// Small-network experiment config shared by the two welfare criteria.
fn quality_config(profile: ProfileKind, algorithms: Vec<Algorithm>) -> ExperimentConfig {
    ExperimentConfig {
        trials: 4_000,
        l_range: (3, 9),
        s_range: (2, 3),
        graph: GraphKind::Geometric { radius: 0.25 },
        profile,
        algorithms,
        seed: BASE_SEED,
        oracle_cap: DEFAULT_ORACLE_CAP,
        rpr_passes: None,
        best_of_random_repeats: None,
        output_dir: None,
    }
}

/// Criterion 8: on small ranking networks the propose-and-reject solver
/// attains at least 93% of the exhaustive-optimal mean welfare, and the
/// baseline ordering holds on means: it beats best-of-random, which beats
/// top-ranked, which beats random.
#[test]
fn a08_ranking_welfare_close_to_optimal_with_expected_ordering() {
    let config = quality_config(
        ProfileKind::RankingUniform,
        vec![
            Algorithm::Rpr,
            Algorithm::Random,
            Algorithm::BestOfRandom,
            Algorithm::TopRanked,
            Algorithm::Optimal,
        ],
    );
    let report = run_experiment(&config).unwrap();
    let rpr_mean = summary_mean(&report, Algorithm::Rpr);
    let optimal = summary_mean(&report, Algorithm::Optimal);
    let random = summary_mean(&report, Algorithm::Random);
    let bor = summary_mean(&report, Algorithm::BestOfRandom);
    let top = summary_mean(&report, Algorithm::TopRanked);
    let ratio = rpr_mean / optimal;
    assert!(
        ratio >= 0.93,
        "[acceptance 08] ranking welfare: FAIL (ratio to optimal {ratio:.4} < 0.93)"
    );
    assert!(
        rpr_mean > bor && bor > top && top > random,
        "[acceptance 08] ranking welfare: FAIL (ordering violated: \
         rpr {rpr_mean:.4}, best-of-random {bor:.4}, top-ranked {top:.4}, random {random:.4})"
    );
    pass(
        8,
        "ranking welfare within tolerance of optimal with the expected ordering",
        &format!("ratio {ratio:.4}"),
    );
}

/// Criterion 9: same as criterion 8 for common-utility networks, with the
/// greedy solver in place of propose-and-reject and sum rate as welfare.
#[test]
fn a09_utility_welfare_close_to_optimal_with_expected_ordering() {
    let config = quality_config(
        ProfileKind::UtilityShannon { snr_db: 10.0 },
        vec![
            Algorithm::Dssar,
            Algorithm::Random,
            Algorithm::BestOfRandom,
            Algorithm::TopRanked,
            Algorithm::Optimal,
        ],
    );
    let report = run_experiment(&config).unwrap();
    let dssar_mean = summary_mean(&report, Algorithm::Dssar);
    let optimal = summary_mean(&report, Algorithm::Optimal);
    let random = summary_mean(&report, Algorithm::Random);
    let bor = summary_mean(&report, Algorithm::BestOfRandom);
    let top = summary_mean(&report, Algorithm::TopRanked);
    let ratio = dssar_mean / optimal;
    assert!(
        ratio >= 0.93,
        "[acceptance 09] utility welfare: FAIL (ratio to optimal {ratio:.4} < 0.93)"
    );
    assert!(
        dssar_mean > bor && bor > top && top > random,
        "[acceptance 09] utility welfare: FAIL (ordering violated: \
         greedy {dssar_mean:.4}, best-of-random {bor:.4}, top-ranked {top:.4}, random {random:.4})"
    );
    pass(
        9,
        "utility welfare within tolerance of optimal with the expected ordering",
        &format!("ratio {ratio:.4}"),
    );
}

/// Criterion 10: on 200 fully enumerable instances no algorithm's welfare
/// exceeds the exhaustive optimum, and the greedy solver's matching is a
/// member of the enumerated stable set on every utility instance.
#[test]
fn a10_no_algorithm_beats_the_oracle_and_greedy_lands_in_the_stable_set() {
    for trial in 1..=200u64 {
        let mut rng = trial_rng(10, trial);
        let num_channels = rng.gen_range(2..=4usize);
        let max_cells = match num_channels {
            2 => 16, // 2^16 = 65,536
            3 => 10, // 3^10 = 59,049
            _ => 8,  // 4^8  = 65,536
        };
        let num_cells = rng.gen_range(3..=max_cells);
        let utility_profile = trial % 2 == 0;
        let config = GenConfig {
            seed: rng.gen(),
            num_cells,
            num_channels,
            graph: GraphKind::Geometric { radius: 0.5 },
            profile: if utility_profile {
                ProfileKind::UtilityShannon { snr_db: 10.0 }
            } else {
                ProfileKind::RankingUniform
            },
        };
        let inst = generate_instance(&config).unwrap();
        let oracle = exhaustive_optimal_welfare(&inst).unwrap();

        let mut matchings = vec![
            random_matching(&inst, rng.gen()),
            best_of_random(&inst, rng.gen(), num_cells).unwrap(),
            top_ranked_proposal(&inst),
        ];
        if utility_profile {
            matchings.push(dssar(&inst).unwrap());
        } else {
            matchings.push(rpr(&inst, num_cells * num_channels).unwrap().matching);
        }
        for matching in &matchings {
            assert!(
                welfare_value(&inst, matching) <= oracle.best_value,
                "[acceptance 10] oracle consistency: FAIL (trial {trial} beat the oracle)"
            );
        }
        if utility_profile {
            let greedy = matchings.last().unwrap();
            let stable = exhaustive_stable_search(&inst).unwrap();
            assert!(
                stable.solvable && stable.stable_set_size >= 1 && is_stable(&inst, greedy),
                "[acceptance 10] oracle consistency: FAIL (trial {trial}: greedy matching \
                 not in the enumerated stable set)"
            );
        }
    }
    pass(
        10,
        "no algorithm beats the enumeration oracle on 200 instances",
        "greedy matchings all inside the enumerated stable set",
    );
}

/// Criterion 11: running the same experiment config twice — once on the
/// worker pool, once sequentially — produces byte-identical CSV artifacts.
#[test]
fn a11_experiment_runs_are_byte_identical() {
    let config = ExperimentConfig {
        trials: 50,
        l_range: (3, 9),
        s_range: (2, 3),
        graph: GraphKind::Geometric { radius: 0.25 },
        profile: ProfileKind::RankingUniform,
        algorithms: vec![
            Algorithm::Rpr,
            Algorithm::Random,
            Algorithm::BestOfRandom,
            Algorithm::TopRanked,
            Algorithm::Optimal,
        ],
        seed: BASE_SEED,
        oracle_cap: DEFAULT_ORACLE_CAP,
        rpr_passes: None,
        best_of_random_repeats: None,
        output_dir: None,
    };
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let paths_a = run_experiment(&config).unwrap().write_csvs(dir_a.path()).unwrap();
    let paths_b = run_experiment_seq(&config).unwrap().write_csvs(dir_b.path()).unwrap();
    assert_eq!(paths_a.len(), paths_b.len());
    for (a, b) in paths_a.iter().zip(&paths_b) {
        assert_eq!(a.file_name(), b.file_name());
        let bytes_a = std::fs::read(a).unwrap();
        let bytes_b = std::fs::read(b).unwrap();
        assert!(
            bytes_a == bytes_b,
            "[acceptance 11] determinism: FAIL ({:?} differs between runs)",
            a.file_name()
        );
    }
    pass(
        11,
        "repeated experiment runs are byte-identical",
        "parallel and sequential runs agree on every CSV",
    );
}
