//! Greedy global utility maximization.
//!
//! The solver keeps a working copy of the utility matrix and repeatedly
//! assigns the globally best remaining (cell, channel) pair, then removes
//! that cell's other options (a cell transmits once) and that channel for
//! the cell's neighbors (they would interfere). Distant cells keep the
//! channel available — that is the channel reuse. At most `L` assignments
//! happen, so the run is `O(L²S)`.
//!
//! The output is always harmonious, and with pairwise-distinct utilities it
//! is stable: a cell that envies a channel lost it to a neighbor picked at
//! a strictly higher utility, which is exactly the blocking justification.

use crate::error::Result;
use crate::model::{Instance, Matching};

/// Runs the greedy solver on a utility instance.
pub fn dssar(inst: &Instance) -> Result<Matching> {
    Ok(dssar_with_order(inst)?.0)
}

/// Like [`dssar`], also returning the assignments in the order they were
/// made. The CSMA simulation must reproduce exactly this sequence.
pub fn dssar_with_order(inst: &Instance) -> Result<(Matching, Vec<(usize, usize)>)> {
    let utility = inst.utility()?;
    let num_cells = inst.num_cells();
    let virtual_channel = inst.virtual_channel();

    // Working copy over the real channels; a zero entry means "removed"
    // (all live utilities are strictly positive by the profile invariant).
    let mut remaining: Vec<Vec<f64>> = (0..num_cells)
        .map(|l| inst.real_channels().map(|s| utility.utility(l, s)).collect())
        .collect();

    let mut assignment = vec![virtual_channel; num_cells];
    let mut order = Vec::new();
    for _ in 0..num_cells {
        // Global argmax; scanning cells then channels in ascending order
        // with a strict `>` keeps the smallest (cell, channel) on ties.
        let mut best: Option<(f64, usize, usize)> = None;
        for (l, row) in remaining.iter().enumerate() {
            for (s, &value) in row.iter().enumerate() {
                if value > 0.0 && best.map_or(true, |(bv, _, _)| value > bv) {
                    best = Some((value, l, s));
                }
            }
        }
        let Some((_, l_star, s_star)) = best else {
            break; // nothing positive left
        };
        assignment[l_star] = s_star;
        order.push((l_star, s_star));
        for value in &mut remaining[l_star] {
            *value = 0.0;
        }
        for neighbor in inst.constraints().neighbors(l_star) {
            remaining[neighbor][s_star] = 0.0;
        }
    }
    Ok((Matching::new(assignment, inst.num_channels())?, order))
}
