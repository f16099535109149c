//! The coexistence and stability predicates.
//!
//! All predicates work on the underlying undirected constraint graph and
//! treat the virtual channel as constraint-free: any number of cells may
//! "share" it, and it never participates in blocking.

use crate::error::{Result, SppError};
use crate::model::{Instance, Matching};

/// May `l1` and `l2` share a real channel? True iff neither lists the other
/// in its constraint set (equivalently: not undirected-adjacent).
pub fn socially_compatible(inst: &Instance, l1: usize, l2: usize) -> Result<bool> {
    let num_cells = inst.num_cells();
    if l1 >= num_cells || l2 >= num_cells {
        return Err(SppError::InvalidArgument(format!(
            "cell index out of range: ({}, {}) with L={}",
            l1 + 1,
            l2 + 1,
            num_cells
        )));
    }
    if l1 == l2 {
        return Err(SppError::InvalidArgument(
            "social compatibility is defined for distinct cells".into(),
        ));
    }
    Ok(!inst.constraints().are_adjacent(l1, l2))
}

/// Is real channel `s` available to cell `l` under `matching`? True iff
/// every current occupant of `s` that `s` prefers over `l` is compatible
/// with `l`. The virtual channel is always available by convention and is
/// rejected here to keep callers honest.
pub fn socially_available(inst: &Instance, matching: &Matching, s: usize, l: usize) -> Result<bool> {
    if l >= inst.num_cells() {
        return Err(SppError::InvalidArgument(format!(
            "cell index {} out of range for L={}",
            l + 1,
            inst.num_cells()
        )));
    }
    if s >= inst.virtual_channel() {
        return Err(SppError::InvalidArgument(format!(
            "social availability is defined for real channels only, got channel {}",
            s + 1
        )));
    }
    Ok(available_unchecked(inst, matching.assignment(), s, l))
}

/// Availability on a raw assignment slice; indices must be valid. Shared by
/// the public predicate and the inner loops of the solvers.
pub(crate) fn available_unchecked(inst: &Instance, assignment: &[usize], s: usize, l: usize) -> bool {
    let oracle = inst.oracle();
    let graph = inst.constraints();
    assignment.iter().enumerate().all(|(other, &ch)| {
        other == l
            || ch != s
            || !oracle.channel_prefers(s, other, l)
            || !graph.are_adjacent(other, l)
    })
}

/// Does any undirected-adjacent pair share a real channel? Sharing the
/// virtual channel is always permitted.
pub fn is_harmonious(inst: &Instance, matching: &Matching) -> bool {
    first_disharmony(inst, matching).is_none()
}

/// First conflicting pair `(l1, l2, shared_channel)` in lexicographic
/// order, if any.
pub fn first_disharmony(inst: &Instance, matching: &Matching) -> Option<(usize, usize, usize)> {
    first_disharmony_of(inst, matching.assignment())
}

pub(crate) fn first_disharmony_of(
    inst: &Instance,
    assignment: &[usize],
) -> Option<(usize, usize, usize)> {
    let virtual_channel = inst.virtual_channel();
    for l1 in 0..inst.num_cells() {
        let s = assignment[l1];
        if s == virtual_channel {
            continue;
        }
        for l2 in l1 + 1..inst.num_cells() {
            if assignment[l2] == s && inst.constraints().are_adjacent(l1, l2) {
                return Some((l1, l2, s));
            }
        }
    }
    None
}

/// Verdict of the full stability check, with a witness for each way the
/// check can fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilityVerdict {
    /// Harmonious and no unjustified blocking pair.
    Stable,
    /// Two conflicting cells share a real channel.
    NotHarmonious {
        cell_a: usize,
        cell_b: usize,
        channel: usize,
    },
    /// `cell` prefers `channel` over its current match and no preferred
    /// incompatible occupant justifies the refusal.
    Blocking { cell: usize, channel: usize },
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        matches!(self, StabilityVerdict::Stable)
    }
}

/// Stability per the blocking-pair definition: the matching must be
/// harmonious, and for every cell `l` and real channel `s` that `l`
/// strictly prefers over its current match, some occupant of `s` that `s`
/// prefers over `l` must be incompatible with `l` (that occupant justifies
/// keeping `l` out). Equivalently: no preferred channel is socially
/// available.
pub fn is_stable(inst: &Instance, matching: &Matching) -> bool {
    stability_diagnostic(inst, matching).is_stable()
}

/// Like [`is_stable`] but reporting the first violation found.
pub fn stability_diagnostic(inst: &Instance, matching: &Matching) -> StabilityVerdict {
    stability_diagnostic_of(inst, matching.assignment())
}

pub(crate) fn stability_diagnostic_of(inst: &Instance, assignment: &[usize]) -> StabilityVerdict {
    if let Some((cell_a, cell_b, channel)) = first_disharmony_of(inst, assignment) {
        return StabilityVerdict::NotHarmonious {
            cell_a,
            cell_b,
            channel,
        };
    }
    let oracle = inst.oracle();
    for l in 0..inst.num_cells() {
        let current = assignment[l];
        for s in inst.real_channels() {
            if !oracle.cell_prefers(l, s, current) {
                continue;
            }
            // `l` would rather be on `s`. The pair blocks unless a
            // preferred incompatible occupant keeps `l` out.
            if available_unchecked(inst, assignment, s, l) {
                return StabilityVerdict::Blocking { cell: l, channel: s };
            }
        }
    }
    StabilityVerdict::Stable
}
