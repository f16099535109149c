//! Classic deferred acceptance, as an external correctness reference.
//!
//! On a complete constraint graph no two cells may share a real channel,
//! and with exactly as many real channels as cells (`L = S−1`) the problem
//! collapses to the textbook one-to-one stable marriage setting. This
//! implementation is deliberately the standard channel-proposing algorithm
//! lifted straight from that literature — independent of the iterative
//! solver in [`crate::algo::rpr`] — so agreement between the two is
//! meaningful evidence rather than a tautology.

use std::collections::VecDeque;

use crate::error::{Result, SppError};
use crate::model::{Instance, Matching};

/// Channel-proposing deferred acceptance on the one-to-one special case.
/// Channels propose down their preference lists; each cell holds the best
/// proposal it has seen and releases the previous holder. The result is
/// the channel-optimal stable matching, with every cell matched.
pub fn gale_shapley_reference(inst: &Instance) -> Result<Matching> {
    let ranking = inst.ranking()?;
    if !inst.constraints().is_complete() {
        return Err(SppError::InvalidArgument(
            "the reference needs a complete constraint graph".into(),
        ));
    }
    let num_cells = inst.num_cells();
    if num_cells != inst.num_channels() - 1 {
        return Err(SppError::InvalidArgument(format!(
            "the reference needs as many real channels as cells, got {} cells and {} real channels",
            num_cells,
            inst.num_channels() - 1
        )));
    }

    let walks: Vec<Vec<usize>> = inst
        .real_channels()
        .map(|s| ranking.cells_by_channel_preference(s))
        .collect();
    let mut next_proposal = vec![0usize; num_cells];
    let mut holds: Vec<Option<usize>> = vec![None; num_cells];
    let mut free: VecDeque<usize> = inst.real_channels().collect();

    while let Some(s) = free.pop_front() {
        // With equal side sizes a free channel always has someone left to
        // propose to before the algorithm ends.
        debug_assert!(next_proposal[s] < num_cells);
        let l = walks[s][next_proposal[s]];
        next_proposal[s] += 1;
        match holds[l] {
            None => holds[l] = Some(s),
            Some(current) => {
                if ranking.cell_rank(l, s) < ranking.cell_rank(l, current) {
                    holds[l] = Some(s);
                    free.push_back(current);
                } else {
                    free.push_back(s);
                }
            }
        }
    }

    let assignment: Vec<usize> = holds
        .into_iter()
        .map(|h| h.expect("equal side sizes leave no cell unmatched"))
        .collect();
    Matching::new(assignment, inst.num_channels())
}
