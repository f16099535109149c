//! Exact enumeration oracles.
//!
//! Both oracles sweep the full assignment space: each of the `L` cells
//! independently picks one of the `S` channels (virtual included), giving
//! `S^L` assignments. Index `k` encodes an assignment with cell 0 as the
//! most significant base-`S` digit, so ascending `k` is ascending
//! lexicographic order over assignments — which makes the documented
//! tie-break ("lexicographically smallest") the same as "smallest `k`",
//! and lets the scan run as an order-independent fold over `0..S^L` (the
//! tie-break is re-applied at every merge, so the parallel and sequential
//! paths return identical results).
//!
//! The space explodes quickly, so every entry point enforces a cap on
//! `S^L` and fails with a size-limit error rather than start an
//! enumeration that cannot finish.

use crate::error::{Result, SppError};
use crate::metrics::welfare_value_of;
use crate::model::{Instance, Matching};
use crate::exec;
use crate::stability::{first_disharmony_of, stability_diagnostic_of};

/// Default bound on the enumerated assignment count (`S^L`).
pub const DEFAULT_ORACLE_CAP: u64 = 10_000_000;

/// What an enumeration oracle found.
///
/// [`exhaustive_optimal_welfare`] fills `best_matching`/`best_value` with
/// the welfare maximizer over harmonious assignments; it does not evaluate
/// stability, so it reports `stable_set_size = 0` and `solvable = true`
/// (the all-virtual assignment is always harmonious, so a best always
/// exists). [`exhaustive_stable_search`] fills `stable_set_size` and
/// `solvable` from the stability scan; `best_matching` is the
/// lexicographically smallest stable matching (with its welfare as
/// `best_value`), or `None`/`0.0` when the instance is unsolvable.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_matching: Option<Matching>,
    pub best_value: f64,
    pub stable_set_size: u64,
    pub solvable: bool,
}

/// Returns `S^L` if it fits under `cap`, else a size-limit error.
fn enumeration_size(inst: &Instance, cap: u64) -> Result<u64> {
    let size = (inst.num_channels() as u128).checked_pow(inst.num_cells() as u32);
    match size {
        Some(n) if n <= u128::from(cap) => Ok(n as u64),
        _ => Err(SppError::SizeLimit(format!(
            "assignment space {}^{} exceeds the enumeration cap of {cap}",
            inst.num_channels(),
            inst.num_cells()
        ))),
    }
}

/// Base-`S` place value of each cell's digit (cell 0 most significant).
fn place_values(inst: &Instance) -> Vec<u64> {
    let num_channels = inst.num_channels() as u64;
    let mut places = vec![1u64; inst.num_cells()];
    for l in (0..inst.num_cells().saturating_sub(1)).rev() {
        places[l] = places[l + 1] * num_channels;
    }
    places
}

fn decode_into(k: u64, places: &[u64], num_channels: u64, out: &mut [usize]) {
    for (digit, &place) in out.iter_mut().zip(places) {
        *digit = ((k / place) % num_channels) as usize;
    }
}

/// Fold state: the best candidate seen plus a reusable decode buffer.
struct Scan {
    value: f64,
    k: Option<u64>,
    count: u64,
    scratch: Vec<usize>,
}

impl Scan {
    fn fresh(num_cells: usize) -> Self {
        Scan {
            value: 0.0,
            k: None,
            count: 0,
            scratch: vec![0; num_cells],
        }
    }

    /// Adopts `(value, k)` if it beats the incumbent (higher value, or
    /// equal value with smaller index).
    fn offer(&mut self, value: f64, k: u64) {
        let adopt = match self.k {
            None => true,
            Some(best) => value > self.value || (value == self.value && k < best),
        };
        if adopt {
            self.value = value;
            self.k = Some(k);
        }
    }

    fn merge(mut self, other: Scan) -> Scan {
        self.count += other.count;
        if let Some(k) = other.k {
            self.offer(other.value, k);
        }
        self
    }
}

fn finish(inst: &Instance, scan: Scan, stable_scan: bool) -> OracleResult {
    let best_matching = scan.k.map(|k| {
        let mut assignment = vec![0usize; inst.num_cells()];
        decode_into(
            k,
            &place_values(inst),
            inst.num_channels() as u64,
            &mut assignment,
        );
        Matching::new(assignment, inst.num_channels()).expect("decoded digits are in range")
    });
    let best_value = match &scan.k {
        Some(_) => scan.value,
        None => 0.0,
    };
    OracleResult {
        best_matching,
        best_value,
        stable_set_size: if stable_scan { scan.count } else { 0 },
        solvable: if stable_scan { scan.count > 0 } else { true },
    }
}

fn optimal_scan(inst: &Instance, cap: u64, sequential: bool) -> Result<OracleResult> {
    let n = enumeration_size(inst, cap)?;
    let places = place_values(inst);
    let num_channels = inst.num_channels() as u64;
    let fold = |mut acc: Scan, k: u64| {
        decode_into(k, &places, num_channels, &mut acc.scratch);
        if first_disharmony_of(inst, &acc.scratch).is_none() {
            let value = welfare_value_of(inst, &acc.scratch);
            acc.offer(value, k);
        }
        acc
    };
    let identity = || Scan::fresh(inst.num_cells());
    let scan = if sequential {
        exec::fold_range_seq(n, identity, fold)
    } else {
        exec::fold_range(n, identity, fold, Scan::merge)
    };
    Ok(finish(inst, scan, false))
}

fn stable_scan(inst: &Instance, cap: u64, sequential: bool) -> Result<OracleResult> {
    let n = enumeration_size(inst, cap)?;
    let places = place_values(inst);
    let num_channels = inst.num_channels() as u64;
    let fold = |mut acc: Scan, k: u64| {
        decode_into(k, &places, num_channels, &mut acc.scratch);
        if stability_diagnostic_of(inst, &acc.scratch).is_stable() {
            acc.count += 1;
            let value = welfare_value_of(inst, &acc.scratch);
            // Smallest stable index wins; value is carried for reporting,
            // so the offer must not prefer higher-welfare candidates.
            let keep = match acc.k {
                None => true,
                Some(best) => k < best,
            };
            if keep {
                acc.value = value;
                acc.k = Some(k);
            }
        }
        acc
    };
    // Keep the smallest stable index; counts always add.
    let merge = |a: Scan, b: Scan| {
        let count = a.count + b.count;
        let keep_a = match (a.k, b.k) {
            (Some(ka), Some(kb)) => ka <= kb,
            (Some(_), None) => true,
            (None, _) => false,
        };
        let mut kept = if keep_a { a } else { b };
        kept.count = count;
        kept
    };
    let identity = || Scan::fresh(inst.num_cells());
    let scan = if sequential {
        exec::fold_range_seq(n, identity, fold)
    } else {
        exec::fold_range(n, identity, fold, merge)
    };
    Ok(finish(inst, scan, true))
}

/// Maximizes welfare over all harmonious assignments (default cap).
pub fn exhaustive_optimal_welfare(inst: &Instance) -> Result<OracleResult> {
    optimal_scan(inst, DEFAULT_ORACLE_CAP, false)
}

/// [`exhaustive_optimal_welfare`] with an explicit cap on `S^L`.
pub fn exhaustive_optimal_welfare_with_cap(inst: &Instance, cap: u64) -> Result<OracleResult> {
    optimal_scan(inst, cap, false)
}

/// Strictly sequential sibling of [`exhaustive_optimal_welfare`];
/// benchmark comparison partner.
pub fn exhaustive_optimal_welfare_seq(inst: &Instance) -> Result<OracleResult> {
    optimal_scan(inst, DEFAULT_ORACLE_CAP, true)
}

/// Counts stable matchings and returns the lexicographically smallest one
/// (default cap). `solvable` answers whether the instance has any stable
/// matching at all.
pub fn exhaustive_stable_search(inst: &Instance) -> Result<OracleResult> {
    stable_scan(inst, DEFAULT_ORACLE_CAP, false)
}

/// [`exhaustive_stable_search`] with an explicit cap on `S^L`.
pub fn exhaustive_stable_search_with_cap(inst: &Instance, cap: u64) -> Result<OracleResult> {
    stable_scan(inst, cap, false)
}
