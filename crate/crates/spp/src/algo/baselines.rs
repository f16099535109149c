//! Benchmark matchers: cheap strategies to compare the main algorithms
//! against. All three produce harmonious matchings; none promises
//! stability.

use std::cmp::Ordering;

use rand::Rng;

use crate::error::{Result, SppError};
use crate::metrics::welfare_value;
use crate::model::{Instance, Matching};
use crate::rng;

/// Builds a matching by repeatedly drawing a uniformly random
/// (channel, cell) pair from the still-feasible ones, assigning it, and
/// discarding every pair that assignment rules out: all pairs of the
/// now-matched cell, and the same channel paired with any of its
/// neighbors. Cells left over when the pool empties stay virtual.
///
/// Harmonious by construction — a pair that would break harmony is
/// discarded before it can be drawn — and deterministic for a given seed.
pub fn random_matching(inst: &Instance, seed: u64) -> Matching {
    let mut rng = rng::stream(seed);
    let virtual_channel = inst.virtual_channel();
    let mut assignment = vec![virtual_channel; inst.num_cells()];
    let mut pool: Vec<(usize, usize)> = Vec::with_capacity(virtual_channel * inst.num_cells());
    for s in inst.real_channels() {
        for l in 0..inst.num_cells() {
            pool.push((s, l));
        }
    }
    while !pool.is_empty() {
        let (s, l) = pool[rng.gen_range(0..pool.len())];
        assignment[l] = s;
        pool.retain(|&(s2, l2)| l2 != l && !(s2 == s && inst.constraints().are_adjacent(l, l2)));
    }
    Matching::new(assignment, inst.num_channels()).expect("drawn pairs stay in range")
}

/// Runs [`random_matching`] under `repeats` derived seeds and keeps the
/// attempt with the highest welfare value (normalized total welfare for
/// ranking instances, sum rate for utility instances). Ties go to the
/// earliest attempt.
pub fn best_of_random(inst: &Instance, seed: u64, repeats: usize) -> Result<Matching> {
    if repeats < 1 {
        return Err(SppError::InvalidArgument(
            "need at least one random attempt".into(),
        ));
    }
    let mut best: Option<(f64, Matching)> = None;
    for r in 1..=repeats {
        let candidate = random_matching(inst, rng::child_seed(seed, r as u64));
        let value = welfare_value(inst, &candidate);
        let improves = match &best {
            Some((incumbent, _)) => value > *incumbent,
            None => true,
        };
        if improves {
            best = Some((value, candidate));
        }
    }
    Ok(best.expect("at least one attempt ran").1)
}

/// One-shot proposal round: every cell proposes to its single most
/// preferred real channel; each channel then walks its proposers in its
/// own preference order, accepting a cell unless it neighbors one already
/// accepted. Rejected cells fall back to virtual — there is no second
/// round.
pub fn top_ranked_proposal(inst: &Instance) -> Matching {
    let oracle = inst.oracle();
    let virtual_channel = inst.virtual_channel();
    let mut assignment = vec![virtual_channel; inst.num_cells()];
    let mut proposers: Vec<Vec<usize>> = vec![Vec::new(); virtual_channel];
    for l in 0..inst.num_cells() {
        proposers[oracle.top_real_channel(l)].push(l);
    }
    for (s, queue) in proposers.iter_mut().enumerate() {
        queue.sort_by(|&a, &b| {
            if oracle.channel_prefers(s, a, b) {
                Ordering::Less
            } else if oracle.channel_prefers(s, b, a) {
                Ordering::Greater
            } else {
                a.cmp(&b)
            }
        });
        let mut accepted: Vec<usize> = Vec::new();
        for &l in queue.iter() {
            if accepted
                .iter()
                .all(|&a| !inst.constraints().are_adjacent(a, l))
            {
                assignment[l] = s;
                accepted.push(l);
            }
        }
    }
    Matching::new(assignment, inst.num_channels()).expect("assignment stays in range")
}
