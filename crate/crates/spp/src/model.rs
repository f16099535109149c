//! Problem instances, preference profiles, and matchings.
//!
//! Conventions used throughout the crate:
//!
//! * Cells and channels are indexed from 0 internally. Channel `S-1` is the
//!   virtual channel `V` — the "stay unmatched" option. File formats and CLI
//!   output use 1-based indices (see the `io` module).
//! * Rank *values* are ordinals and stay 1-based: rank 1 is the most
//!   preferred. The virtual channel is pinned to the worst rank for every
//!   cell, and its column in the channel-rank matrix is the identity, so the
//!   ranking matrices carry no information about `V` beyond "last resort".
//! * Utilities are strictly positive on real channels and exactly zero on
//!   the virtual channel.

use crate::error::{Result, SppError};
use crate::graph::ConstraintGraph;

/// Preference ranking matrices for both sides.
///
/// `cell_ranks[l][s]` is the rank cell `l` gives channel `s` (1 = best);
/// each row is a permutation of `1..=S` with the virtual column fixed to
/// `S`. `channel_ranks[l][s]` is the rank channel `s` gives cell `l`; each
/// real column is a permutation of `1..=L`, and the virtual column is the
/// identity `(1, 2, …, L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingProfile {
    cell_ranks: Vec<Vec<u32>>,
    channel_ranks: Vec<Vec<u32>>,
}

impl RankingProfile {
    pub fn new(cell_ranks: Vec<Vec<u32>>, channel_ranks: Vec<Vec<u32>>) -> Result<Self> {
        let num_cells = cell_ranks.len();
        if num_cells == 0 {
            return Err(SppError::Validation("cell-rank matrix is empty".into()));
        }
        let num_channels = cell_ranks[0].len();
        if num_channels < 2 {
            return Err(SppError::Validation(
                "need at least one real channel plus the virtual channel".into(),
            ));
        }
        if channel_ranks.len() != num_cells
            || cell_ranks.iter().any(|row| row.len() != num_channels)
            || channel_ranks.iter().any(|row| row.len() != num_channels)
        {
            return Err(SppError::Validation(
                "rank matrices must both be L x S".into(),
            ));
        }
        for (cell, row) in cell_ranks.iter().enumerate() {
            if !is_permutation_of_one_to_n(row, num_channels as u32) {
                return Err(SppError::Validation(format!(
                    "cell-rank row {} is not a permutation of 1..={}",
                    cell + 1,
                    num_channels
                )));
            }
            if row[num_channels - 1] != num_channels as u32 {
                return Err(SppError::Validation(format!(
                    "cell {} must rank the virtual channel last",
                    cell + 1
                )));
            }
        }
        for s in 0..num_channels {
            let column: Vec<u32> = (0..num_cells).map(|l| channel_ranks[l][s]).collect();
            if !is_permutation_of_one_to_n(&column, num_cells as u32) {
                return Err(SppError::Validation(format!(
                    "channel-rank column {} is not a permutation of 1..={}",
                    s + 1,
                    num_cells
                )));
            }
        }
        for (cell, row) in channel_ranks.iter().enumerate() {
            if row[num_channels - 1] != cell as u32 + 1 {
                return Err(SppError::Validation(
                    "virtual column of the channel-rank matrix must be the identity".into(),
                ));
            }
        }
        Ok(Self {
            cell_ranks,
            channel_ranks,
        })
    }

    pub fn num_cells(&self) -> usize {
        self.cell_ranks.len()
    }

    pub fn num_channels(&self) -> usize {
        self.cell_ranks[0].len()
    }

    /// Rank cell `l` assigns channel `s` (1 = best).
    pub fn cell_rank(&self, l: usize, s: usize) -> u32 {
        self.cell_ranks[l][s]
    }

    /// Rank channel `s` assigns cell `l` (1 = best).
    pub fn channel_rank(&self, l: usize, s: usize) -> u32 {
        self.channel_ranks[l][s]
    }

    pub fn cell_ranks(&self) -> &[Vec<u32>] {
        &self.cell_ranks
    }

    pub fn channel_ranks(&self) -> &[Vec<u32>] {
        &self.channel_ranks
    }

    /// Cells in channel `s`'s preference order, most preferred first.
    pub fn cells_by_channel_preference(&self, s: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.num_cells()).collect();
        order.sort_by_key(|&l| self.channel_ranks[l][s]);
        order
    }
}

fn is_permutation_of_one_to_n(values: &[u32], n: u32) -> bool {
    if values.len() != n as usize {
        return false;
    }
    let mut seen = vec![false; n as usize];
    for &v in values {
        if v == 0 || v > n || seen[v as usize - 1] {
            return false;
        }
        seen[v as usize - 1] = true;
    }
    true
}

/// Common-utility matrix: `utilities[l][s]` is the payoff of pairing cell
/// `l` with channel `s`. Real channels must have strictly positive utility;
/// the virtual column is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityProfile {
    utilities: Vec<Vec<f64>>,
}

impl UtilityProfile {
    pub fn new(utilities: Vec<Vec<f64>>) -> Result<Self> {
        let num_cells = utilities.len();
        if num_cells == 0 {
            return Err(SppError::Validation("utility matrix is empty".into()));
        }
        let num_channels = utilities[0].len();
        if num_channels < 2 {
            return Err(SppError::Validation(
                "need at least one real channel plus the virtual channel".into(),
            ));
        }
        for (cell, row) in utilities.iter().enumerate() {
            if row.len() != num_channels {
                return Err(SppError::Validation("utility matrix must be L x S".into()));
            }
            for (s, &u) in row.iter().enumerate() {
                if !u.is_finite() {
                    return Err(SppError::Validation(format!(
                        "utility of cell {} on channel {} is not finite",
                        cell + 1,
                        s + 1
                    )));
                }
                if s == num_channels - 1 {
                    if u != 0.0 {
                        return Err(SppError::Validation(format!(
                            "cell {} must have zero utility on the virtual channel",
                            cell + 1
                        )));
                    }
                } else if u <= 0.0 {
                    return Err(SppError::Validation(format!(
                        "utility of cell {} on real channel {} must be positive",
                        cell + 1,
                        s + 1
                    )));
                }
            }
        }
        Ok(Self { utilities })
    }

    pub fn num_cells(&self) -> usize {
        self.utilities.len()
    }

    pub fn num_channels(&self) -> usize {
        self.utilities[0].len()
    }

    pub fn utility(&self, l: usize, s: usize) -> f64 {
        self.utilities[l][s]
    }

    pub fn utilities(&self) -> &[Vec<f64>] {
        &self.utilities
    }

    /// True iff no two entries over the real channels are equal. Required by
    /// the carrier-sense simulation, whose ordering is undefined under ties.
    pub fn real_utilities_pairwise_distinct(&self) -> bool {
        let mut values: Vec<f64> = self
            .utilities
            .iter()
            .flat_map(|row| row[..row.len() - 1].iter().copied())
            .collect();
        values.sort_by(f64::total_cmp);
        values.windows(2).all(|w| w[0] != w[1])
    }
}

/// Exactly one preference model per instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Ranking(RankingProfile),
    Utility(UtilityProfile),
}

impl Profile {
    pub fn num_cells(&self) -> usize {
        match self {
            Profile::Ranking(p) => p.num_cells(),
            Profile::Utility(p) => p.num_cells(),
        }
    }

    pub fn num_channels(&self) -> usize {
        match self {
            Profile::Ranking(p) => p.num_channels(),
            Profile::Utility(p) => p.num_channels(),
        }
    }
}

/// A complete problem statement: cells, channels (last index virtual),
/// social constraints, and one preference profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    constraints: ConstraintGraph,
    profile: Profile,
}

impl Instance {
    pub fn new(constraints: ConstraintGraph, profile: Profile) -> Result<Self> {
        if constraints.num_cells() != profile.num_cells() {
            return Err(SppError::Validation(format!(
                "constraint graph has {} cells but the profile has {}",
                constraints.num_cells(),
                profile.num_cells()
            )));
        }
        Ok(Self {
            constraints,
            profile,
        })
    }

    /// Number of cells, `L`.
    pub fn num_cells(&self) -> usize {
        self.profile.num_cells()
    }

    /// Number of channels including the virtual one, `S`.
    pub fn num_channels(&self) -> usize {
        self.profile.num_channels()
    }

    /// Index of the virtual channel (`S-1`).
    pub fn virtual_channel(&self) -> usize {
        self.num_channels() - 1
    }

    /// Iterator over the real channel indices `0..S-1`.
    pub fn real_channels(&self) -> std::ops::Range<usize> {
        0..self.virtual_channel()
    }

    pub fn constraints(&self) -> &ConstraintGraph {
        &self.constraints
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// The ranking profile, or an error for utility instances.
    pub fn ranking(&self) -> Result<&RankingProfile> {
        match &self.profile {
            Profile::Ranking(p) => Ok(p),
            Profile::Utility(_) => Err(SppError::InvalidArgument(
                "operation requires a ranking profile, got a utility profile".into(),
            )),
        }
    }

    /// The utility profile, or an error for ranking instances.
    pub fn utility(&self) -> Result<&UtilityProfile> {
        match &self.profile {
            Profile::Utility(p) => Ok(p),
            Profile::Ranking(_) => Err(SppError::InvalidArgument(
                "operation requires a utility profile, got a ranking profile".into(),
            )),
        }
    }

    /// Strict-preference view over whichever profile is present.
    pub fn oracle(&self) -> PreferenceOracle<'_> {
        PreferenceOracle {
            profile: &self.profile,
        }
    }

    /// The all-virtual matching (every cell unmatched).
    pub fn all_virtual(&self) -> Matching {
        Matching {
            assignment: vec![self.virtual_channel(); self.num_cells()],
            num_channels: self.num_channels(),
        }
    }

    /// Validates a raw assignment against this instance's dimensions.
    pub fn matching_from_assignment(&self, assignment: Vec<usize>) -> Result<Matching> {
        if assignment.len() != self.num_cells() {
            return Err(SppError::Validation(format!(
                "matching assigns {} cells but the instance has {}",
                assignment.len(),
                self.num_cells()
            )));
        }
        Matching::new(assignment, self.num_channels())
    }
}

/// A total assignment of every cell to one channel (virtual allowed).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    assignment: Vec<usize>,
    num_channels: usize,
}

impl Matching {
    pub fn new(assignment: Vec<usize>, num_channels: usize) -> Result<Self> {
        if num_channels < 2 {
            return Err(SppError::Validation(
                "matching needs at least two channels".into(),
            ));
        }
        if let Some((cell, &s)) = assignment
            .iter()
            .enumerate()
            .find(|(_, &s)| s >= num_channels)
        {
            return Err(SppError::Validation(format!(
                "cell {} is assigned channel {} beyond S={}",
                cell + 1,
                s + 1,
                num_channels
            )));
        }
        Ok(Self {
            assignment,
            num_channels,
        })
    }

    pub fn num_cells(&self) -> usize {
        self.assignment.len()
    }

    pub fn num_channels(&self) -> usize {
        self.num_channels
    }

    /// Channel assigned to `cell` (may be the virtual channel).
    pub fn channel_of(&self, cell: usize) -> usize {
        self.assignment[cell]
    }

    /// True iff `cell` sits on the virtual channel.
    pub fn is_virtual(&self, cell: usize) -> bool {
        self.assignment[cell] == self.num_channels - 1
    }

    /// Number of cells on real channels.
    pub fn matched_count(&self) -> usize {
        let virtual_channel = self.num_channels - 1;
        self.assignment
            .iter()
            .filter(|&&s| s != virtual_channel)
            .count()
    }

    /// Cells currently assigned to channel `s`, ascending.
    pub fn occupants(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == s)
            .map(|(cell, _)| cell)
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }
}

/// Uniform strict-preference interface over both preference models.
///
/// Ranking profiles prefer smaller ranks; utility profiles prefer larger
/// utilities, and *equal* utilities yield no preference either way.
#[derive(Debug, Clone, Copy)]
pub struct PreferenceOracle<'a> {
    profile: &'a Profile,
}

impl<'a> PreferenceOracle<'a> {
    /// Does cell `l` strictly prefer channel `s1` over channel `s2`?
    pub fn cell_prefers(&self, l: usize, s1: usize, s2: usize) -> bool {
        match self.profile {
            Profile::Ranking(p) => p.cell_rank(l, s1) < p.cell_rank(l, s2),
            Profile::Utility(p) => p.utility(l, s1) > p.utility(l, s2),
        }
    }

    /// Does channel `s` strictly prefer cell `l1` over cell `l2`?
    pub fn channel_prefers(&self, s: usize, l1: usize, l2: usize) -> bool {
        match self.profile {
            Profile::Ranking(p) => p.channel_rank(l1, s) < p.channel_rank(l2, s),
            Profile::Utility(p) => p.utility(l1, s) > p.utility(l2, s),
        }
    }

    /// Cell `l`'s most preferred real channel (ties broken by smallest
    /// channel index, which only matters for utility profiles).
    pub fn top_real_channel(&self, l: usize) -> usize {
        let real = self.profile.num_channels() - 1;
        match self.profile {
            Profile::Ranking(p) => (0..real)
                .min_by_key(|&s| p.cell_rank(l, s))
                .expect("at least one real channel"),
            Profile::Utility(p) => (0..real)
                .max_by(|&a, &b| p.utility(l, a).total_cmp(&p.utility(l, b)))
                .expect("at least one real channel"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_ranking() -> RankingProfile {
        // L=2, S=3. Cell 0 prefers channel 0, cell 1 prefers channel 1.
        RankingProfile::new(
            vec![vec![1, 2, 3], vec![2, 1, 3]],
            vec![vec![1, 2, 1], vec![2, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn ranking_accepts_valid_matrices() {
        let p = small_ranking();
        assert_eq!(p.cell_rank(0, 0), 1);
        assert_eq!(p.channel_rank(1, 1), 1);
    }

    #[test]
    fn ranking_rejects_non_permutation_row() {
        let err = RankingProfile::new(
            vec![vec![1, 1, 3], vec![2, 1, 3]],
            vec![vec![1, 2, 1], vec![2, 1, 2]],
        )
        .unwrap_err();
        assert!(err.to_string().contains("permutation"));
    }

    #[test]
    fn ranking_rejects_virtual_not_last() {
        assert!(RankingProfile::new(
            vec![vec![3, 2, 1], vec![2, 1, 3]],
            vec![vec![1, 2, 1], vec![2, 1, 2]],
        )
        .is_err());
    }

    #[test]
    fn ranking_rejects_bad_virtual_column() {
        assert!(RankingProfile::new(
            vec![vec![1, 2, 3], vec![2, 1, 3]],
            vec![vec![1, 2, 2], vec![2, 1, 1]],
        )
        .is_err());
    }

    #[test]
    fn utility_rejects_nonpositive_real_entry() {
        assert!(UtilityProfile::new(vec![vec![1.0, 0.0, 0.0]]).is_err());
        assert!(UtilityProfile::new(vec![vec![1.0, -2.0, 0.0]]).is_err());
    }

    #[test]
    fn utility_rejects_nonzero_virtual_entry() {
        assert!(UtilityProfile::new(vec![vec![1.0, 2.0, 0.5]]).is_err());
    }

    #[test]
    fn utility_distinctness_check() {
        let distinct = UtilityProfile::new(vec![vec![1.0, 2.0, 0.0], vec![3.0, 4.0, 0.0]]).unwrap();
        assert!(distinct.real_utilities_pairwise_distinct());
        let tied = UtilityProfile::new(vec![vec![1.0, 2.0, 0.0], vec![2.0, 4.0, 0.0]]).unwrap();
        assert!(!tied.real_utilities_pairwise_distinct());
    }

    #[test]
    fn oracle_is_strict_for_rankings() {
        let p = small_ranking();
        let inst = Instance::new(ConstraintGraph::empty(2), Profile::Ranking(p)).unwrap();
        let oracle = inst.oracle();
        assert!(oracle.cell_prefers(0, 0, 1));
        assert!(!oracle.cell_prefers(0, 1, 0));
        // Real channels always beat the virtual channel.
        assert!(oracle.cell_prefers(0, 1, 2));
    }

    #[test]
    fn oracle_ties_have_no_preference() {
        let p = UtilityProfile::new(vec![vec![2.0, 2.0, 0.0]]).unwrap();
        let inst = Instance::new(ConstraintGraph::empty(1), Profile::Utility(p)).unwrap();
        let oracle = inst.oracle();
        assert!(!oracle.cell_prefers(0, 0, 1));
        assert!(!oracle.cell_prefers(0, 1, 0));
    }

    #[test]
    fn top_real_channel_matches_rank_one() {
        let p = small_ranking();
        let inst = Instance::new(ConstraintGraph::empty(2), Profile::Ranking(p)).unwrap();
        assert_eq!(inst.oracle().top_real_channel(0), 0);
        assert_eq!(inst.oracle().top_real_channel(1), 1);
    }

    #[test]
    fn matching_rejects_out_of_range_channel() {
        assert!(Matching::new(vec![0, 3], 3).is_err());
    }

    #[test]
    fn matching_occupants_and_counts() {
        let m = Matching::new(vec![0, 2, 0], 3).unwrap();
        assert_eq!(m.occupants(0).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(m.matched_count(), 2);
        assert!(m.is_virtual(1));
    }

    #[test]
    fn instance_rejects_dimension_mismatch() {
        let p = small_ranking();
        assert!(Instance::new(ConstraintGraph::empty(3), Profile::Ranking(p)).is_err());
    }
}
