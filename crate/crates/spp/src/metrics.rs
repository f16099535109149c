//! Welfare and rate measures.
//!
//! Ranking instances are scored from both sides: the channel side earns
//! `L - rank + 1` for each real match (its favorite cell is worth `L`), the
//! cell side earns `S - rank` (a top-choice channel is worth `S-1`; the
//! virtual channel, pinned to rank `S`, is worth 0 — virtual matches
//! contribute nothing on either side). Raw sums are normalized by their
//! upper bounds — every cell matched at best possible rank — giving values
//! in [0, 1]: channel side by `L·L`, cell side by `L·(S-1)`, total welfare
//! the mean of the two. Utility instances are scored by the sum rate
//! `Σ u(l, φ(l))`.
//!
//! [`welfare_value`] is the scalar on which algorithms are compared:
//! normalized total welfare for rankings, sum rate for utilities.

use crate::error::Result;
use crate::model::{Instance, Matching, Profile};

/// Channel-side welfare: `Σ (L - rank + 1)` over real matches.
pub fn s_welfare(inst: &Instance, matching: &Matching) -> Result<f64> {
    inst.ranking()?;
    Ok(s_welfare_of(inst, matching.assignment()))
}

fn s_welfare_of(inst: &Instance, assignment: &[usize]) -> f64 {
    let ranking = inst.ranking().expect("caller checked the profile");
    let num_cells = inst.num_cells() as f64;
    let mut total = 0.0;
    for (l, &s) in assignment.iter().enumerate() {
        if s != inst.virtual_channel() {
            total += num_cells - f64::from(ranking.channel_rank(l, s)) + 1.0;
        }
    }
    total
}

/// Cell-side welfare: `Σ (S - rank)` over real matches.
pub fn l_welfare(inst: &Instance, matching: &Matching) -> Result<f64> {
    inst.ranking()?;
    Ok(l_welfare_of(inst, matching.assignment()))
}

fn l_welfare_of(inst: &Instance, assignment: &[usize]) -> f64 {
    let ranking = inst.ranking().expect("caller checked the profile");
    let num_channels = inst.num_channels() as f64;
    let mut total = 0.0;
    for (l, &s) in assignment.iter().enumerate() {
        if s != inst.virtual_channel() {
            total += num_channels - f64::from(ranking.cell_rank(l, s));
        }
    }
    total
}

/// Sum of utilities under the matching (virtual column contributes zero).
pub fn sum_rate(inst: &Instance, matching: &Matching) -> Result<f64> {
    let utility = inst.utility()?;
    Ok(matching
        .assignment()
        .iter()
        .enumerate()
        .map(|(l, &s)| utility.utility(l, s))
        .sum())
}

/// Both ranking welfare sums with their normalizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankingWelfare {
    pub s_welfare_raw: f64,
    pub l_welfare_raw: f64,
    /// `s_welfare_raw / L²`, clamped to [0, 1].
    pub s_welfare_norm: f64,
    /// `l_welfare_raw / (L·(S-1))`, clamped to [0, 1].
    pub l_welfare_norm: f64,
    /// Mean of the two normalized values.
    pub total_welfare_norm: f64,
}

/// Welfare summary of one matching. Exactly one of `ranking` / `sum_rate`
/// is present, matching the instance's profile.
#[derive(Debug, Clone, PartialEq)]
pub struct WelfareReport {
    pub matched_count: usize,
    pub ranking: Option<RankingWelfare>,
    pub sum_rate: Option<f64>,
}

/// Computes the applicable measures for the instance's profile.
pub fn welfare_report(inst: &Instance, matching: &Matching) -> WelfareReport {
    let assignment = matching.assignment();
    match inst.profile() {
        Profile::Ranking(_) => {
            let s_raw = s_welfare_of(inst, assignment);
            let l_raw = l_welfare_of(inst, assignment);
            let num_cells = inst.num_cells() as f64;
            let real = (inst.num_channels() - 1) as f64;
            let s_norm = (s_raw / (num_cells * num_cells)).clamp(0.0, 1.0);
            let l_norm = (l_raw / (num_cells * real)).clamp(0.0, 1.0);
            WelfareReport {
                matched_count: matching.matched_count(),
                ranking: Some(RankingWelfare {
                    s_welfare_raw: s_raw,
                    l_welfare_raw: l_raw,
                    s_welfare_norm: s_norm,
                    l_welfare_norm: l_norm,
                    total_welfare_norm: (s_norm + l_norm) / 2.0,
                }),
                sum_rate: None,
            }
        }
        Profile::Utility(_) => WelfareReport {
            matched_count: matching.matched_count(),
            ranking: None,
            sum_rate: Some(sum_rate(inst, matching).expect("utility profile present")),
        },
    }
}

/// The scalar algorithms are compared on: normalized total welfare for
/// ranking instances, sum rate for utility instances.
pub fn welfare_value(inst: &Instance, matching: &Matching) -> f64 {
    welfare_value_of(inst, matching.assignment())
}

/// [`welfare_value`] on a raw assignment; used by the enumeration oracles
/// to score candidates without constructing a `Matching` each.
pub(crate) fn welfare_value_of(inst: &Instance, assignment: &[usize]) -> f64 {
    match inst.profile() {
        Profile::Ranking(_) => {
            let num_cells = inst.num_cells() as f64;
            let real = (inst.num_channels() - 1) as f64;
            let s_norm = (s_welfare_of(inst, assignment) / (num_cells * num_cells)).clamp(0.0, 1.0);
            let l_norm = (l_welfare_of(inst, assignment) / (num_cells * real)).clamp(0.0, 1.0);
            (s_norm + l_norm) / 2.0
        }
        Profile::Utility(p) => assignment
            .iter()
            .enumerate()
            .map(|(l, &s)| p.utility(l, s))
            .sum(),
    }
}
