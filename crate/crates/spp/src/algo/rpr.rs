//! Iterative propose-and-reject over preference rankings.
//!
//! Every cell starts on the virtual channel. Each outer pass visits the
//! real channels in a fixed order; a channel walks its preference list from
//! most to least favored and, for each cell, either proposes (the cell
//! accepts iff the channel ranks no worse than its current match and the
//! channel is socially available to it) or — if the channel has become
//! unavailable to a cell still holding it, because a preferred incompatible
//! occupant arrived — dissolves that pairing back to virtual. The virtual
//! channel itself is skipped: with its rank pinned to worst, a proposal by
//! it could only "re-assign" cells already on it, so the skip is
//! behavior-preserving.
//!
//! A pass that changes nothing is a fixed point, and a fixed point is
//! stable: any blocking pair (cell prefers an available channel) would have
//! been taken when that channel's walk reached the cell. The converse
//! budget question — how many passes a fixed point takes — is subtle: one
//! pass suffices on empty graphs, and on complete graphs the fixed point
//! equals the classic deferred-acceptance outcome, but a pass budget equal
//! to the cell count is *not* always enough there (see the frozen
//! counterexample in the tests: a channel freed after its own sub-pass must
//! idle a full pass before re-proposing, and such stalls can chain). The
//! default budget of `L·S` passes has always sufficed empirically; the
//! outcome reports the pass count actually used and whether a fixed point
//! was reached, so callers can see non-convergence rather than trust a
//! bound.

use crate::error::{Result, SppError};
use crate::model::{Instance, Matching};
use crate::stability::{available_unchecked, is_stable};

/// Outcome of one solver run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RprOutcome {
    pub matching: Matching,
    /// Outer passes completed (≤ the requested budget).
    pub iterations_used: usize,
    /// Whether a full pass changed nothing (fixed point reached).
    pub converged: bool,
    /// Stability verdict on the final matching. `converged` implies
    /// `stable`; a non-converged run may still happen to be stable.
    pub stable: bool,
}

/// Default outer-pass budget: `L·S`, the general upper bound under which
/// every observed run has reached its fixed point.
pub fn default_rpr_passes(inst: &Instance) -> usize {
    inst.num_cells() * inst.num_channels()
}

/// Runs the solver with the default channel order (ascending index).
pub fn rpr(inst: &Instance, passes: usize) -> Result<RprOutcome> {
    let order: Vec<usize> = inst.real_channels().collect();
    rpr_with_channel_order(inst, passes, &order)
}

/// Runs the solver visiting channels in `channel_order` within each pass.
/// The order must be a permutation of the real channels. Whether the order
/// affects reachability of stability on general graphs is an open question,
/// so it is exposed rather than hard-coded.
pub fn rpr_with_channel_order(
    inst: &Instance,
    passes: usize,
    channel_order: &[usize],
) -> Result<RprOutcome> {
    let ranking = inst.ranking()?;
    if passes < 1 {
        return Err(SppError::InvalidArgument(
            "need at least one outer pass".into(),
        ));
    }
    let real = inst.virtual_channel();
    {
        let mut seen = vec![false; real];
        if channel_order.len() != real {
            return Err(SppError::InvalidArgument(format!(
                "channel order must list each of the {real} real channels once"
            )));
        }
        for &s in channel_order {
            if s >= real || seen[s] {
                return Err(SppError::InvalidArgument(format!(
                    "channel order must be a permutation of the real channels, got index {}",
                    s + 1
                )));
            }
            seen[s] = true;
        }
    }

    // Each channel's preference walk, precomputed once.
    let walks: Vec<Vec<usize>> = inst
        .real_channels()
        .map(|s| ranking.cells_by_channel_preference(s))
        .collect();

    let virtual_channel = inst.virtual_channel();
    let mut assignment = vec![virtual_channel; inst.num_cells()];
    let mut iterations_used = 0;
    let mut converged = false;
    for _ in 0..passes {
        iterations_used += 1;
        let mut changed = false;
        for &s in channel_order {
            for &l in &walks[s] {
                if available_unchecked(inst, &assignment, s, l) {
                    // The channel proposes; the cell accepts iff it ranks
                    // `s` no worse than its current match. Equality only
                    // happens when it already holds `s` (a no-op).
                    if ranking.cell_rank(l, s) <= ranking.cell_rank(l, assignment[l])
                        && assignment[l] != s
                    {
                        assignment[l] = s;
                        changed = true;
                    }
                } else if assignment[l] == s {
                    // A preferred incompatible occupant arrived; the
                    // pairing dissolves.
                    assignment[l] = virtual_channel;
                    changed = true;
                }
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }

    let matching = Matching::new(assignment, inst.num_channels())?;
    let stable = is_stable(inst, &matching);
    debug_assert!(!converged || stable, "a fixed point must be stable");
    Ok(RprOutcome {
        matching,
        iterations_used,
        converged,
        stable,
    })
}
