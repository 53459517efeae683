//! Incremental triangle bookkeeping.
//!
//! The ledger tracks the total number of triangles in the graph and, for each
//! non-adjacent pair with at least one common neighbour, how many common
//! neighbours it has. That count is the number of incomplete triangles the
//! pair would close if it became an edge, so the cost of a candidate edge is a
//! single lookup.

use std::collections::HashMap;

use super::{pair, ConstraintGraph, GraphError};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TriangleLedger {
    triangles: u64,
    /// Only non-adjacent pairs with a nonzero count are stored.
    common: HashMap<(u32, u32), u32>,
}

impl TriangleLedger {
    pub fn new() -> TriangleLedger {
        TriangleLedger::default()
    }

    /// Ledger consistent with an existing graph.
    pub fn from_graph(graph: &ConstraintGraph) -> TriangleLedger {
        let mut ledger = TriangleLedger::new();
        let mut rebuilt = ConstraintGraph::new(graph.n());
        let mut edges: Vec<(u32, u32)> = graph.pairs().map(|(p, _)| p).collect();
        edges.sort_unstable();
        for (a, b) in edges {
            ledger.insert_edge(&rebuilt, a, b);
            rebuilt.bump(a, b);
        }
        ledger
    }

    pub fn triangle_count(&self) -> u64 {
        self.triangles
    }

    /// Common neighbours of a non-adjacent pair. Adjacent pairs are not tracked
    /// and report 0.
    pub fn common_neighbor_count(&self, u: u32, w: u32) -> u32 {
        self.common.get(&pair(u, w)).copied().unwrap_or(0)
    }

    /// Number of tracked (non-adjacent, nonzero) pairs.
    pub fn tracked_pairs(&self) -> usize {
        self.common.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), u32)> + '_ {
        self.common.iter().map(|(&p, &c)| (p, c))
    }

    /// Accounts for the edge `{a, b}` about to be added to `graph`, which must
    /// not contain it yet. Returns the number of triangles it closes.
    fn insert_edge(&mut self, graph: &ConstraintGraph, a: u32, b: u32) -> u64 {
        let closed = u64::from(self.common.remove(&pair(a, b)).unwrap_or(0));
        self.triangles += closed;
        for (center, other) in [(a, b), (b, a)] {
            for &x in graph.neighbors(center) {
                if x != other && !graph.is_edge(other, x) {
                    *self.common.entry(pair(other, x)).or_insert(0) += 1;
                }
            }
        }
        closed
    }
}

/// Adds a clause over the distinct variables `vars` to both the graph and
/// its ledger. Returns the number of triangles the clause closed.
pub fn add_clause(
    graph: &mut ConstraintGraph,
    ledger: &mut TriangleLedger,
    vars: &[u32],
) -> Result<u64, GraphError> {
    graph.validate(vars)?;
    let mut closed = 0;
    for (i, &a) in vars.iter().enumerate() {
        for &b in &vars[i + 1..] {
            if !graph.is_edge(a, b) {
                closed += ledger.insert_edge(graph, a, b);
            }
            graph.bump(a, b);
        }
    }
    Ok(closed)
}

/// Increase in the triangle count if `v` joined a clause whose other members
/// are `partial`.
///
/// Counts the triangles through `v` that use at least one of the new edges
/// `{v, u}`, with the edges among `partial` treated as present whether or not
/// they are already in the graph. When `partial` is already committed (as in
/// the generators) this is exactly the change in the graph's triangle count.
pub fn triangle_delta(
    graph: &ConstraintGraph,
    ledger: &TriangleLedger,
    partial: &[u32],
    v: u32,
) -> u64 {
    let mut fresh = 0u64;
    let mut closed = 0u64;
    for &u in partial {
        if graph.is_edge(v, u) {
            continue;
        }
        fresh += 1;
        // One new edge: third vertex is an old neighbour of v adjacent to u.
        closed += u64::from(ledger.common_neighbor_count(v, u));
        closed += partial
            .iter()
            .filter(|&&w| w != u && graph.is_edge(v, w) && !graph.is_edge(u, w))
            .count() as u64;
    }
    // Two new edges {v, u1}, {v, u2}: u1 and u2 share the clause.
    closed + fresh * fresh.saturating_sub(1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn committed(n: u32, clauses: &[&[u32]]) -> (ConstraintGraph, TriangleLedger) {
        let mut g = ConstraintGraph::new(n);
        let mut l = TriangleLedger::new();
        for c in clauses {
            add_clause(&mut g, &mut l, c).unwrap();
        }
        (g, l)
    }

    #[test]
    fn one_clause_one_triangle() {
        let (_, l) = committed(3, &[&[1, 2, 3]]);
        assert_eq!(l.triangle_count(), 1);
        assert_eq!(l.tracked_pairs(), 0);
    }

    #[test]
    fn closing_an_incomplete_triangle() {
        let (mut g, mut l) = committed(3, &[&[1, 2], &[1, 3]]);
        assert_eq!(l.common_neighbor_count(2, 3), 1);
        assert_eq!(add_clause(&mut g, &mut l, &[2, 3]).unwrap(), 1);
        assert_eq!(l.triangle_count(), 1);
        assert_eq!(l.common_neighbor_count(2, 3), 0);
        assert_eq!(l.tracked_pairs(), 0);
    }

    #[test]
    fn k4_minus_edge_closes_two() {
        let (mut g, mut l) = committed(4, &[&[1, 2, 3], &[2, 3, 4]]);
        assert_eq!(l.triangle_count(), 2);
        assert_eq!(l.common_neighbor_count(1, 4), 2);
        assert_eq!(add_clause(&mut g, &mut l, &[1, 4]).unwrap(), 2);
        assert_eq!(l.triangle_count(), 4);
    }

    #[test]
    fn delta_examples() {
        let g = ConstraintGraph::new(3);
        let l = TriangleLedger::new();
        assert_eq!(triangle_delta(&g, &l, &[1, 2], 3), 1);
        assert_eq!(triangle_delta(&g, &l, &[1], 2), 0);

        let (g, l) = committed(3, &[&[1, 2], &[1, 3]]);
        assert_eq!(triangle_delta(&g, &l, &[2], 3), 1);
    }

    #[test]
    fn ledger_from_graph_matches_incremental() {
        let (g, l) = committed(6, &[&[1, 2, 3], &[3, 4, 5], &[5, 6, 1], &[2, 4, 6]]);
        let rebuilt = TriangleLedger::from_graph(&g);
        assert_eq!(rebuilt, l);
    }
}
