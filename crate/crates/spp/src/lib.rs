//! Stable polygamy matching for spectrum access with channel reuse.
//!
//! This crate models the assignment of a large set of *cells* to a small
//! set of *channels* under pairwise coexistence constraints. Each cell ends
//! up on exactly one channel; the last channel index is a *virtual* channel
//! meaning "unmatched" (zero utility, least preferred, exempt from
//! constraints). Two cells that conflict — either lists the other in its
//! social constraint set — may not share a real channel, but distant cells
//! may: channels are reused across the interference graph.
//!
//! The crate provides:
//!
//! * the data model and the coexistence/stability predicates ([`model`],
//!   [`graph`], [`stability`]);
//! * seeded instance generators — random geometric, empty, complete,
//!   disjoint-clique, and random-forest constraint graphs; uniform ranking
//!   profiles and Shannon-rate utility matrices ([`gen`], [`rng`]);
//! * solvers and baselines: a greedy utility maximizer, an iterative
//!   propose-and-reject solver for rankings, random/best-of-random/
//!   top-ranked baselines, exhaustive oracles, and a classic two-sided
//!   reference matcher ([`algo`]);
//! * a discrete-event simulation showing the greedy solver emerges from
//!   distributed CSMA backoff ([`sim`]);
//! * welfare metrics ([`metrics`]) and a reproducible Monte Carlo
//!   experiment harness emitting CSV artifacts ([`experiment`]), plus an
//!   exhaustive search for constraint graphs that admit no stable matching
//!   at all ([`counterexample`]).
//!
//! Determinism is a design requirement: every randomized path is seeded
//! through [`rng`]'s documented stream-splitting rules, and experiment
//! outputs are byte-identical across runs and worker counts. The `parallel`
//! feature (on by default) runs trials and enumeration on a rayon pool;
//! disabling it yields the same bytes sequentially.

pub mod algo;
pub mod counterexample;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod gen;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod model;
pub mod rng;
pub mod sim;
pub mod stability;

pub use error::{Result, SppError};
pub use graph::ConstraintGraph;
pub use model::{Instance, Matching, PreferenceOracle, Profile, RankingProfile, UtilityProfile};
pub use stability::{
    is_harmonious, is_stable, socially_available, socially_compatible, stability_diagnostic,
    StabilityVerdict,
};
