//! Discrete-event simulation of distributed greedy channel access.
//!
//! The centralized greedy solver ([`crate::algo::dssar`]) repeatedly picks
//! the globally best remaining (cell, channel) pair. The same outcome
//! emerges without a coordinator when every cell contends for every
//! channel with a backoff timer that shrinks as utility grows: the global
//! utility maximizer has the globally shortest timer, so it transmits
//! first, and its transmission removes exactly the candidates the
//! centralized algorithm would have zeroed — the cell's other candidates
//! (it is now committed) and the channel for its neighbors (harmony).
//! Induction over transmissions gives pairwise-identical runs.
//!
//! Two removal mechanisms are simulated. Under *carrier sensing*,
//! neighbors of a transmitter hear the channel busy and silently drop
//! their timers for it; ideal sensing (zero delay, no collisions) is
//! assumed, which is also why this mode insists on pairwise-distinct
//! utilities — two identical timers would collide and ideal sensing has
//! no tie physics. Under *control messages*, the transmitter instead
//! sends an explicit notification to its neighbors, modeled with zero
//! delivery delay; ties are then resolved by the deterministic event
//! order (earliest time, then smallest cell, then smallest channel),
//! which coincides with the centralized tie-break.

use std::collections::BinaryHeap;

use crate::error::{Result, SppError};
use crate::model::{Instance, Matching};

/// How a transmission clears contending neighbors off its channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    /// Neighbors sense the busy channel themselves.
    CarrierSense,
    /// The transmitter notifies neighbors explicitly.
    ControlMessages,
}

/// What happened at one point of simulated time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// `cell` committed to `channel` when its backoff expired.
    Transmit,
    /// `cell` heard `channel` busy and withdrew its candidate.
    SenseBusy,
    /// `cell` was told `channel` is taken and withdrew its candidate.
    ControlMessage,
}

/// One trace row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEvent {
    pub time: f64,
    pub kind: EventKind,
    pub cell: usize,
    pub channel: usize,
}

/// Full simulation record: every event in processing order, plus where
/// each cell ended up. Cells whose candidates were all withdrawn stay on
/// the virtual channel.
#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub events: Vec<SimEvent>,
    pub final_matching: Matching,
}

impl SimTrace {
    /// The (cell, channel) pairs in transmit order.
    pub fn transmit_order(&self) -> Vec<(usize, usize)> {
        self.events
            .iter()
            .filter(|e| e.kind == EventKind::Transmit)
            .map(|e| (e.cell, e.channel))
            .collect()
    }
}

/// Maps a utility to a backoff delay: `1/u`. Any strictly decreasing
/// positive map works — only the induced ordering matters — and the
/// reciprocal is the simplest one.
pub fn backoff(u: f64) -> Result<f64> {
    if !u.is_finite() || u <= 0.0 {
        return Err(SppError::InvalidArgument(format!(
            "backoff needs a positive finite utility, got {u}"
        )));
    }
    Ok(1.0 / u)
}

/// A scheduled backoff expiry, ordered by time, then cell, then channel.
/// Utilities are finite and positive, so times are never NaN and
/// `total_cmp` agrees with the usual order.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Pending {
    time: f64,
    cell: usize,
    channel: usize,
}

impl Eq for Pending {}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.cell.cmp(&other.cell))
            .then(self.channel.cmp(&other.channel))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Runs the event loop to quiescence and returns the full trace.
pub fn simulate_csma(inst: &Instance, mode: SimMode) -> Result<SimTrace> {
    let utility = inst.utility()?;
    if mode == SimMode::CarrierSense && !utility.real_utilities_pairwise_distinct() {
        return Err(SppError::InvalidArgument(
            "carrier sensing is undefined under tied utilities; \
             use control messages or perturb the instance"
                .into(),
        ));
    }

    let num_cells = inst.num_cells();
    let virtual_channel = inst.virtual_channel();
    let mut live = vec![vec![true; virtual_channel]; num_cells];
    let mut queue: BinaryHeap<std::cmp::Reverse<Pending>> = BinaryHeap::new();
    for cell in 0..num_cells {
        for channel in inst.real_channels() {
            queue.push(std::cmp::Reverse(Pending {
                time: backoff(utility.utility(cell, channel))?,
                cell,
                channel,
            }));
        }
    }

    let mut assignment = vec![virtual_channel; num_cells];
    let mut events = Vec::new();
    while let Some(std::cmp::Reverse(next)) = queue.pop() {
        // Withdrawn candidates stay in the heap; drop them on arrival.
        if !live[next.cell][next.channel] {
            continue;
        }
        let Pending {
            time,
            cell,
            channel,
        } = next;
        events.push(SimEvent {
            time,
            kind: EventKind::Transmit,
            cell,
            channel,
        });
        assignment[cell] = channel;
        // The transmitter is committed: its other timers die silently.
        for s in inst.real_channels() {
            live[cell][s] = false;
        }
        // Neighbors withdraw from the now-busy channel. Both mechanisms
        // act at the transmit time (ideal sensing / zero message delay);
        // only the event kind differs.
        let kind = match mode {
            SimMode::CarrierSense => EventKind::SenseBusy,
            SimMode::ControlMessages => EventKind::ControlMessage,
        };
        for neighbor in inst.constraints().neighbors(cell) {
            if live[neighbor][channel] {
                live[neighbor][channel] = false;
                events.push(SimEvent {
                    time,
                    kind,
                    cell: neighbor,
                    channel,
                });
            }
        }
    }

    Ok(SimTrace {
        events,
        final_matching: Matching::new(assignment, inst.num_channels())?,
    })
}
