//! Solvers, baselines, oracles.
//!
//! * [`dssar`] — greedy global utility maximizer for common-utility
//!   instances; provably stable, and realizable by distributed CSMA (see
//!   [`crate::sim`]).
//! * [`rpr`] — iterative propose-and-reject solver for ranking instances;
//!   converges to a stable matching whenever it reaches a fixed point.
//! * [`random_matching`], [`best_of_random`], [`top_ranked_proposal`] —
//!   the comparison baselines.
//! * [`exhaustive_optimal_welfare`], [`exhaustive_stable_search`] — exact
//!   enumeration oracles over all `S^L` assignments.
//! * [`gale_shapley_reference`] — classic channel-proposing deferred
//!   acceptance for the complete-graph special case, used as an external
//!   correctness reference.

mod baselines;
mod dssar;
mod exhaustive;
mod gale_shapley;
mod rpr;

pub use baselines::{best_of_random, random_matching, top_ranked_proposal};
pub use dssar::{dssar, dssar_with_order};
pub use exhaustive::{
    exhaustive_optimal_welfare, exhaustive_optimal_welfare_seq, exhaustive_optimal_welfare_with_cap,
    exhaustive_stable_search, exhaustive_stable_search_with_cap, OracleResult, DEFAULT_ORACLE_CAP,
};
pub use gale_shapley::gale_shapley_reference;
pub use rpr::{default_rpr_passes, rpr, rpr_with_channel_order, RprOutcome};
