//! Social constraint graphs.
//!
//! Constraints are directed at the modeling level (each cell `l` declares a
//! set `C_l` of cells it cannot coexist with), but every coexistence
//! predicate works on the underlying undirected graph: `a` and `b` conflict
//! if either one lists the other. This module stores both views.

use std::collections::BTreeSet;

use crate::error::{Result, SppError};

/// Directed constraint sets over cells `0..L`, plus the derived symmetric
/// adjacency used by all harmony and stability checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintGraph {
    directed: Vec<BTreeSet<usize>>,
    /// Symmetric closure of `directed`: `undirected[a]` contains `b` iff
    /// `b ∈ directed[a]` or `a ∈ directed[b]`.
    undirected: Vec<BTreeSet<usize>>,
}

impl ConstraintGraph {
    /// Builds a graph from per-cell directed constraint sets.
    ///
    /// Fails on self-loops or out-of-range members.
    pub fn from_directed_sets(directed: Vec<BTreeSet<usize>>) -> Result<Self> {
        let num_cells = directed.len();
        for (cell, set) in directed.iter().enumerate() {
            if set.contains(&cell) {
                return Err(SppError::Validation(format!(
                    "constraint set of cell {} contains a self-loop",
                    cell + 1
                )));
            }
            if let Some(&bad) = set.iter().find(|&&other| other >= num_cells) {
                return Err(SppError::Validation(format!(
                    "constraint set of cell {} references cell {} beyond L={}",
                    cell + 1,
                    bad + 1,
                    num_cells
                )));
            }
        }
        let undirected = underlying_undirected(&directed);
        Ok(Self {
            directed,
            undirected,
        })
    }

    /// Builds a graph from a list of undirected edges: each `(a, b)` is
    /// recorded as `b ∈ C_a` (the symmetric closure makes direction moot).
    pub fn from_edges(num_cells: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut directed = vec![BTreeSet::new(); num_cells];
        for &(a, b) in edges {
            if a >= num_cells || b >= num_cells {
                return Err(SppError::Validation(format!(
                    "edge ({}, {}) out of range for L={}",
                    a + 1,
                    b + 1,
                    num_cells
                )));
            }
            if a == b {
                return Err(SppError::Validation(format!(
                    "edge ({}, {}) is a self-loop",
                    a + 1,
                    b + 1
                )));
            }
            directed[a].insert(b);
        }
        Self::from_directed_sets(directed)
    }

    /// Graph with no constraints at all.
    pub fn empty(num_cells: usize) -> Self {
        Self {
            directed: vec![BTreeSet::new(); num_cells],
            undirected: vec![BTreeSet::new(); num_cells],
        }
    }

    /// Graph where every pair of cells conflicts.
    pub fn complete(num_cells: usize) -> Self {
        let directed: Vec<BTreeSet<usize>> = (0..num_cells)
            .map(|cell| (0..num_cells).filter(|&other| other != cell).collect())
            .collect();
        let undirected = directed.clone();
        Self {
            directed,
            undirected,
        }
    }

    /// Number of cells (nodes).
    pub fn num_cells(&self) -> usize {
        self.directed.len()
    }

    /// The raw directed constraint set of one cell.
    pub fn directed_set(&self, cell: usize) -> &BTreeSet<usize> {
        &self.directed[cell]
    }

    /// Whether `a` and `b` conflict (undirected adjacency).
    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.undirected[a].contains(&b)
    }

    /// Undirected neighbors of one cell, ascending.
    pub fn neighbors(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        self.undirected[cell].iter().copied()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.undirected.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Undirected edge list with `a < b`, lexicographically sorted.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.edge_count());
        for (a, nbrs) in self.undirected.iter().enumerate() {
            for &b in nbrs.range(a + 1..) {
                edges.push((a, b));
            }
        }
        edges
    }

    /// Directed edge list `(from, to)` meaning `to ∈ C_from`, sorted.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (from, set) in self.directed.iter().enumerate() {
            for &to in set {
                edges.push((from, to));
            }
        }
        edges
    }

    /// True iff every pair of cells conflicts.
    pub fn is_complete(&self) -> bool {
        let n = self.num_cells();
        self.undirected.iter().all(|nbrs| nbrs.len() == n - 1)
    }

    /// True iff the undirected graph contains no cycle.
    pub fn is_acyclic(&self) -> bool {
        // A forest has exactly (nodes - components) edges.
        let components = self.connected_components();
        self.edge_count() == self.num_cells() - components.len()
    }

    /// Connected components of the undirected graph. Components are sorted
    /// by their smallest member and each component is sorted ascending.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.num_cells();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut component = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(cell) = stack.pop() {
                component.push(cell);
                for &next in &self.undirected[cell] {
                    if !seen[next] {
                        seen[next] = true;
                        stack.push(next);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        // Scanning from cell 0 upward already yields components ordered by
        // smallest member.
        components
    }
}

/// Symmetric closure of directed constraint sets: `(a, b)` are adjacent iff
/// `b ∈ directed[a]` or `a ∈ directed[b]`. Duplicate declarations collapse.
pub fn underlying_undirected(directed: &[BTreeSet<usize>]) -> Vec<BTreeSet<usize>> {
    let mut undirected = vec![BTreeSet::new(); directed.len()];
    for (from, set) in directed.iter().enumerate() {
        for &to in set {
            undirected[from].insert(to);
            undirected[to].insert(from);
        }
    }
    undirected
}
