//! Seeded instance generators.
//!
//! Every generator is a pure function of its seed and parameters: the same
//! inputs produce bit-identical output on every platform (see [`crate::rng`]
//! for the seeding rules). Graph generators and profile generators are
//! independent so either can be swapped while holding the other fixed.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Result, SppError};
use crate::graph::ConstraintGraph;
use crate::model::{Instance, Profile, RankingProfile, UtilityProfile};
use crate::rng;

/// Constraint-graph family selector.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GraphKind {
    /// Random geometric graph on the unit square: edge iff distance < radius.
    Geometric { radius: f64 },
    /// No constraints.
    Empty,
    /// Every pair conflicts.
    Complete,
    /// Disjoint cliques with the given block sizes (must sum to `L`).
    DisjointCliques { sizes: Vec<usize> },
    /// Random forest (acyclic by construction).
    RandomForest,
    /// Fixed undirected edge list (1-based pairs, as in instance files).
    Explicit { edges: Vec<(usize, usize)> },
}

/// Preference-profile family selector.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProfileKind {
    /// Uniformly random ranking permutations on both sides.
    RankingUniform,
    /// Shannon-rate utilities under Rayleigh fading at the given mean SNR.
    UtilityShannon { snr_db: f64 },
}

/// Parameters for generating one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub num_cells: usize,
    pub num_channels: usize,
    pub graph: GraphKind,
    pub profile: ProfileKind,
}

impl GenConfig {
    /// Checks parameter ranges before any generation work.
    pub fn validate(&self) -> Result<()> {
        if self.num_cells < 1 {
            return Err(SppError::InvalidArgument("need at least one cell".into()));
        }
        if self.num_channels < 2 {
            return Err(SppError::InvalidArgument(
                "need at least one real channel plus the virtual channel".into(),
            ));
        }
        match &self.graph {
            GraphKind::Geometric { radius } => {
                if !(*radius > 0.0 && *radius <= std::f64::consts::SQRT_2) {
                    return Err(SppError::InvalidArgument(format!(
                        "geometric radius must lie in (0, sqrt(2)], got {radius}"
                    )));
                }
            }
            GraphKind::DisjointCliques { sizes } => {
                if sizes.is_empty() || sizes.iter().any(|&n| n == 0) {
                    return Err(SppError::InvalidArgument(
                        "clique sizes must be non-empty and positive".into(),
                    ));
                }
                if sizes.iter().sum::<usize>() != self.num_cells {
                    return Err(SppError::InvalidArgument(format!(
                        "clique sizes sum to {} but L={}",
                        sizes.iter().sum::<usize>(),
                        self.num_cells
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Random geometric constraint graph: `num_cells` points uniform i.i.d. in
/// the unit square, undirected edge between points closer than `radius`.
pub fn gen_geometric_graph(seed: u64, num_cells: usize, radius: f64) -> Result<ConstraintGraph> {
    if radius <= 0.0 {
        return Err(SppError::InvalidArgument(format!(
            "geometric radius must be positive, got {radius}"
        )));
    }
    let mut rng = rng::stream(seed);
    let points: Vec<(f64, f64)> = (0..num_cells)
        .map(|_| (rng.gen::<f64>(), rng.gen::<f64>()))
        .collect();
    let mut edges = Vec::new();
    for a in 0..num_cells {
        for b in a + 1..num_cells {
            let dx = points[a].0 - points[b].0;
            let dy = points[a].1 - points[b].1;
            if (dx * dx + dy * dy).sqrt() < radius {
                edges.push((a, b));
            }
        }
    }
    ConstraintGraph::from_edges(num_cells, &edges)
}

/// Disjoint cliques with the given sizes, laid out in index order.
pub fn gen_disjoint_cliques(sizes: &[usize]) -> Result<ConstraintGraph> {
    if sizes.is_empty() || sizes.iter().any(|&n| n == 0) {
        return Err(SppError::InvalidArgument(
            "clique sizes must be non-empty and positive".into(),
        ));
    }
    let num_cells: usize = sizes.iter().sum();
    let mut edges = Vec::new();
    let mut base = 0;
    for &size in sizes {
        for a in 0..size {
            for b in a + 1..size {
                edges.push((base + a, base + b));
            }
        }
        base += size;
    }
    ConstraintGraph::from_edges(num_cells, &edges)
}

/// Random forest on `num_cells` nodes: the node set is split uniformly into
/// a random number of trees, and each tree grows by random attachment (each
/// node links to a uniformly chosen earlier node of its tree). Acyclic by
/// construction; the exact distribution over forests is a documented choice,
/// not load-bearing.
pub fn gen_random_forest(seed: u64, num_cells: usize) -> Result<ConstraintGraph> {
    if num_cells == 0 {
        return Err(SppError::InvalidArgument("need at least one cell".into()));
    }
    let mut rng = rng::stream(seed);
    let num_trees = rng.gen_range(1..=num_cells);
    // Node -> tree assignment; trees may end up empty, which just yields
    // fewer components.
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); num_trees];
    for cell in 0..num_cells {
        let tree = rng.gen_range(0..num_trees);
        members[tree].push(cell);
    }
    let mut edges = Vec::new();
    for tree in &members {
        for (i, &cell) in tree.iter().enumerate().skip(1) {
            let parent = tree[rng.gen_range(0..i)];
            edges.push((parent, cell));
        }
    }
    ConstraintGraph::from_edges(num_cells, &edges)
}

/// Uniformly random ranking profile: each cell row is a uniform permutation
/// of the real channels (virtual pinned last), each real channel column a
/// uniform permutation of the cells (virtual column pinned to identity).
/// Cell rows are drawn first, then channel columns, all from one stream.
pub fn gen_ranking_profile(seed: u64, num_cells: usize, num_channels: usize) -> Result<RankingProfile> {
    if num_channels < 2 {
        return Err(SppError::InvalidArgument(
            "need at least one real channel plus the virtual channel".into(),
        ));
    }
    let mut rng = rng::stream(seed);
    let real = num_channels - 1;
    let mut cell_ranks = Vec::with_capacity(num_cells);
    for _ in 0..num_cells {
        let mut row: Vec<u32> = (1..=real as u32).collect();
        row.shuffle(&mut rng);
        row.push(num_channels as u32);
        cell_ranks.push(row);
    }
    let mut channel_ranks = vec![vec![0u32; num_channels]; num_cells];
    for s in 0..real {
        let mut column: Vec<u32> = (1..=num_cells as u32).collect();
        column.shuffle(&mut rng);
        for (l, &rank) in column.iter().enumerate() {
            channel_ranks[l][s] = rank;
        }
    }
    for (l, row) in channel_ranks.iter_mut().enumerate() {
        row[real] = l as u32 + 1;
    }
    RankingProfile::new(cell_ranks, channel_ranks)
}

/// Shannon-rate utilities under Rayleigh fading: for each real channel,
/// `u = log2(1 + g * 10^(snr_db/10))` with `g` i.i.d. unit-mean
/// exponential. Draws with `u = 0` exactly (possible only when `g = 0`) are
/// resampled so every real utility is strictly positive. Virtual column is
/// zero.
pub fn gen_shannon_utilities(
    seed: u64,
    num_cells: usize,
    num_channels: usize,
    snr_db: f64,
) -> Result<UtilityProfile> {
    if num_channels < 2 {
        return Err(SppError::InvalidArgument(
            "need at least one real channel plus the virtual channel".into(),
        ));
    }
    if !snr_db.is_finite() {
        return Err(SppError::InvalidArgument(format!(
            "snr_db must be finite, got {snr_db}"
        )));
    }
    let snr_linear = 10f64.powf(snr_db / 10.0);
    let mut rng = rng::stream(seed);
    let mut utilities = Vec::with_capacity(num_cells);
    for _ in 0..num_cells {
        let mut row = Vec::with_capacity(num_channels);
        for _ in 0..num_channels - 1 {
            let u = loop {
                let gain: f64 = rng.sample(rand_distr::Exp1);
                let u = (gain * snr_linear).ln_1p() / std::f64::consts::LN_2;
                if u > 0.0 {
                    break u;
                }
            };
            row.push(u);
        }
        row.push(0.0);
        utilities.push(row);
    }
    UtilityProfile::new(utilities)
}

/// The fixed five-cell, two-real-channel ranking profile used by the
/// unsolvability search: paired with the right constraint graph, no stable
/// matching exists (see [`crate::counterexample`]). The constraint graph is
/// supplied separately by that search.
pub fn counterexample_profile() -> RankingProfile {
    let cell_ranks = vec![
        vec![1, 2, 3],
        vec![2, 1, 3],
        vec![1, 2, 3],
        vec![2, 1, 3],
        vec![1, 2, 3],
    ];
    let channel_ranks = vec![
        vec![2, 5, 1],
        vec![4, 2, 2],
        vec![3, 1, 3],
        vec![1, 4, 4],
        vec![5, 3, 5],
    ];
    RankingProfile::new(cell_ranks, channel_ranks)
        .expect("fixed counterexample profile is well-formed")
}

/// Builds the constraint graph selected by `config` (profile ignored).
pub fn generate_graph(config: &GenConfig) -> Result<ConstraintGraph> {
    config.validate()?;
    let graph_seed = rng::child_seed(config.seed, 1);
    match &config.graph {
        GraphKind::Geometric { radius } => {
            gen_geometric_graph(graph_seed, config.num_cells, *radius)
        }
        GraphKind::Empty => Ok(ConstraintGraph::empty(config.num_cells)),
        GraphKind::Complete => Ok(ConstraintGraph::complete(config.num_cells)),
        GraphKind::DisjointCliques { sizes } => gen_disjoint_cliques(sizes),
        GraphKind::RandomForest => gen_random_forest(graph_seed, config.num_cells),
        GraphKind::Explicit { edges } => {
            let zero_based: Result<Vec<(usize, usize)>> = edges
                .iter()
                .map(|&(a, b)| {
                    if a == 0 || b == 0 {
                        Err(SppError::InvalidArgument(
                            "explicit edges use 1-based cell indices".into(),
                        ))
                    } else {
                        Ok((a - 1, b - 1))
                    }
                })
                .collect();
            ConstraintGraph::from_edges(config.num_cells, &zero_based?)
        }
    }
}

/// Builds the preference profile selected by `config` (graph ignored).
pub fn generate_profile(config: &GenConfig) -> Result<Profile> {
    config.validate()?;
    let profile_seed = rng::child_seed(config.seed, 2);
    match &config.profile {
        ProfileKind::RankingUniform => Ok(Profile::Ranking(gen_ranking_profile(
            profile_seed,
            config.num_cells,
            config.num_channels,
        )?)),
        ProfileKind::UtilityShannon { snr_db } => Ok(Profile::Utility(gen_shannon_utilities(
            profile_seed,
            config.num_cells,
            config.num_channels,
            *snr_db,
        )?)),
    }
}

/// Generates a full instance: graph from child stream 1 of the seed,
/// profile from child stream 2.
pub fn generate_instance(config: &GenConfig) -> Result<Instance> {
    let graph = generate_graph(config)?;
    let profile = generate_profile(config)?;
    Instance::new(graph, profile)
}
