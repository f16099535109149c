//! Search for constraint graphs with no stable matching at all.
//!
//! Solvability of a ranking instance depends on the constraint graph: the
//! empty graph always admits a stable matching (everyone takes their top
//! choice) and so do complete and forest graphs, but general graphs do
//! not. This module pins that down constructively: it fixes one known
//! 5-cell, 2-real-channel preference profile
//! ([`crate::gen::counterexample_profile`]) and sweeps **all** 1,024
//! undirected graphs on its five cells, running the exhaustive stability
//! oracle on every one. Any graph the oracle reports unsolvable is a
//! certified counterexample — and for the first of them the report carries
//! a full refutation: each of the `3^5 = 243` assignments together with
//! the specific condition it violates (a disharmonious adjacent pair, or
//! a cell/channel pair that would defect).

use crate::error::{Result, SppError};
use crate::exec;
use crate::gen;
use crate::graph::ConstraintGraph;
use crate::model::{Instance, Profile, RankingProfile};
use crate::stability::{stability_diagnostic, StabilityVerdict};

/// One enumerated assignment and why it is not stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefutedAssignment {
    pub assignment: Vec<usize>,
    pub verdict: StabilityVerdict,
}

/// Everything the sweep found.
#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    /// The fixed preference profile all graphs were tested under.
    pub profile: RankingProfile,
    /// Every unsolvable graph, in ascending edge-mask order.
    pub unsolvable: Vec<ConstraintGraph>,
    /// Per-assignment refutation for `unsolvable[0]`: all 243 assignments
    /// with their violated condition.
    pub refutation: Vec<RefutedAssignment>,
}

/// The ten undirected node pairs on five cells, in bit order.
fn edge_pairs() -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(10);
    for a in 0..5 {
        for b in (a + 1)..5 {
            pairs.push((a, b));
        }
    }
    pairs
}

fn graph_from_mask(mask: usize, pairs: &[(usize, usize)]) -> ConstraintGraph {
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .enumerate()
        .filter(|(bit, _)| mask & (1 << bit) != 0)
        .map(|(_, &pair)| pair)
        .collect();
    ConstraintGraph::from_edges(5, &edges).expect("pairs are valid 5-node edges")
}

/// Sweeps all 1,024 graphs on five cells under the fixed profile and
/// reports every unsolvable one, with a full refutation of the first.
/// Errors if the sweep finds none (that would contradict the oracle-
/// verified fact that unsolvable instances exist).
pub fn counterexample_search() -> Result<CounterexampleReport> {
    let profile = gen::counterexample_profile();
    let pairs = edge_pairs();

    let unsolvable_flags = exec::map_indexed(1 << pairs.len(), |mask| {
        let graph = graph_from_mask(mask, &pairs);
        let inst = Instance::new(graph, Profile::Ranking(profile.clone()))
            .expect("profile and graph dimensions agree");
        let result = crate::algo::exhaustive_stable_search(&inst)
            .expect("3^5 assignments sit far under the cap");
        !result.solvable
    });
    let unsolvable: Vec<ConstraintGraph> = unsolvable_flags
        .iter()
        .enumerate()
        .filter(|&(_, &flag)| flag)
        .map(|(mask, _)| graph_from_mask(mask, &pairs))
        .collect();

    let first = unsolvable.first().ok_or_else(|| {
        SppError::Validation(
            "no unsolvable graph found on five cells; the stability oracle \
             or the fixed profile is wrong"
                .into(),
        )
    })?;

    let inst = Instance::new(first.clone(), Profile::Ranking(profile.clone()))
        .expect("profile and graph dimensions agree");
    let num_channels = inst.num_channels();
    let mut refutation = Vec::with_capacity(243);
    for k in 0..243 {
        let mut assignment = vec![0usize; 5];
        let mut rest = k;
        for digit in assignment.iter_mut().rev() {
            *digit = rest % num_channels;
            rest /= num_channels;
        }
        let matching = inst
            .matching_from_assignment(assignment.clone())
            .expect("decoded digits are in range");
        let verdict = stability_diagnostic(&inst, &matching);
        if verdict.is_stable() {
            return Err(SppError::Validation(format!(
                "assignment {assignment:?} is stable on a graph the oracle \
                 called unsolvable"
            )));
        }
        refutation.push(RefutedAssignment {
            assignment,
            verdict,
        });
    }

    Ok(CounterexampleReport {
        profile,
        unsolvable,
        refutation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn edge_set(graph: &ConstraintGraph) -> BTreeSet<(usize, usize)> {
        graph.undirected_edges().into_iter().collect()
    }

    #[test]
    fn sweep_finds_the_three_known_unsolvable_graphs() {
        let report = counterexample_search().unwrap();
        let found: Vec<BTreeSet<(usize, usize)>> =
            report.unsolvable.iter().map(edge_set).collect();

        let five_cycle: BTreeSet<(usize, usize)> =
            [(0, 2), (0, 3), (1, 2), (1, 4), (3, 4)].into_iter().collect();
        let mut with_chord = five_cycle.clone();
        with_chord.insert((0, 4));
        let mut with_two_chords = with_chord.clone();
        with_two_chords.insert((0, 1));

        assert_eq!(found, vec![five_cycle, with_chord, with_two_chords]);
    }

    #[test]
    fn empty_graph_is_not_reported() {
        let report = counterexample_search().unwrap();
        assert!(report.unsolvable.iter().all(|g| g.edge_count() > 0));
    }

    #[test]
    fn refutation_covers_every_assignment_with_a_violation() {
        let report = counterexample_search().unwrap();
        assert_eq!(report.refutation.len(), 243);
        // All 243 assignments are distinct and none is stable.
        let distinct: BTreeSet<&Vec<usize>> =
            report.refutation.iter().map(|r| &r.assignment).collect();
        assert_eq!(distinct.len(), 243);
        assert!(report.refutation.iter().all(|r| !r.verdict.is_stable()));
    }
}
