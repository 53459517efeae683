//! Constraint graph of an instance and the incremental structures the greedy
//! generators query while building clauses.
//!
//! Vertices are variables; two variables are adjacent when they occur together
//! in at least one clause, regardless of polarity. Each edge also carries the
//! number of clauses in which the pair co-occurs, so repeated pairs (pairs
//! that share two or more clauses) can be counted.

mod ledger;
mod stats;

use std::collections::HashMap;

use thiserror::Error;

use crate::sat_core::Instance;

pub use ledger::{add_clause, triangle_delta, TriangleLedger};
pub use stats::{
    average_distance, average_local_clustering, cluster_coefficient, incomplete_triangle_count,
    repeated_pair_count, triangle_count, GraphStats,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("variable {var} outside 1..={n}")]
    VarOutOfRange { var: u32, n: u32 },
    #[error("variable {var} listed twice in one clause")]
    DuplicateVar { var: u32 },
}

/// Unordered variable pair stored as `(min, max)`.
pub(crate) fn pair(u: u32, v: u32) -> (u32, u32) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintGraph {
    n: u32,
    /// Sorted neighbour lists, indexed by `var - 1`.
    adjacency: Vec<Vec<u32>>,
    multiplicity: HashMap<(u32, u32), u32>,
}

impl ConstraintGraph {
    /// Graph on `n` isolated vertices.
    pub fn new(n: u32) -> ConstraintGraph {
        ConstraintGraph {
            n,
            adjacency: vec![Vec::new(); n as usize],
            multiplicity: HashMap::new(),
        }
    }

    /// Builds the constraint graph of `instance`. A clause contributes at most
    /// one co-occurrence per pair, even when it lists a variable twice.
    pub fn from_instance(instance: &Instance) -> ConstraintGraph {
        let mut graph = ConstraintGraph::new(instance.n());
        let mut vars: Vec<u32> = Vec::new();
        for clause in instance.clauses() {
            vars.clear();
            vars.extend(clause.vars());
            vars.sort_unstable();
            vars.dedup();
            graph
                .add_clause(&vars)
                .expect("instance variables are in range and deduplicated");
        }
        graph
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adjacency[v as usize - 1]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.neighbors(v).len()
    }

    pub fn is_edge(&self, u: u32, v: u32) -> bool {
        u != v && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Number of clauses in which `u` and `v` occur together.
    pub fn multiplicity(&self, u: u32, v: u32) -> u32 {
        self.multiplicity.get(&pair(u, v)).copied().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.multiplicity.len()
    }

    /// Iterates `((u, v), multiplicity)` with `u < v`, in no particular order.
    pub fn pairs(&self) -> impl Iterator<Item = ((u32, u32), u32)> + '_ {
        self.multiplicity.iter().map(|(&p, &c)| (p, c))
    }

    /// Records one more clause over the distinct variables `vars`. Returns the
    /// edges that did not exist before, in the order they were inserted.
    pub fn add_clause(&mut self, vars: &[u32]) -> Result<Vec<(u32, u32)>, GraphError> {
        self.validate(vars)?;
        let mut fresh = Vec::new();
        for (i, &a) in vars.iter().enumerate() {
            for &b in &vars[i + 1..] {
                if self.bump(a, b) {
                    fresh.push(pair(a, b));
                }
            }
        }
        Ok(fresh)
    }

    /// Number of vertices in `partial` already adjacent to `v`: the pairs that
    /// would become (or stay) repeated if `v` joined a clause with `partial`.
    pub fn pair_penalty(&self, partial: &[u32], v: u32) -> usize {
        partial.iter().filter(|&&u| self.is_edge(u, v)).count()
    }

    pub(crate) fn validate(&self, vars: &[u32]) -> Result<(), GraphError> {
        for (i, &v) in vars.iter().enumerate() {
            if v == 0 || v > self.n {
                return Err(GraphError::VarOutOfRange { var: v, n: self.n });
            }
            if vars[..i].contains(&v) {
                return Err(GraphError::DuplicateVar { var: v });
            }
        }
        Ok(())
    }

    /// Increments the multiplicity of `{a, b}`; returns true if the edge is new.
    pub(crate) fn bump(&mut self, a: u32, b: u32) -> bool {
        let count = self.multiplicity.entry(pair(a, b)).or_insert(0);
        *count += 1;
        if *count > 1 {
            return false;
        }
        insert_sorted(&mut self.adjacency[a as usize - 1], b);
        insert_sorted(&mut self.adjacency[b as usize - 1], a);
        true
    }
}

fn insert_sorted(list: &mut Vec<u32>, value: u32) {
    if let Err(pos) = list.binary_search(&value) {
        list.insert(pos, value);
    }
}

/// Constraint graph of `instance`.
pub fn build_graph(instance: &Instance) -> ConstraintGraph {
    ConstraintGraph::from_instance(instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat_core::Clause;

    fn graph_of(n: u32, clauses: &[&[i64]]) -> ConstraintGraph {
        let inst =
            Instance::new(n, clauses.iter().map(|c| Clause::from_dimacs(c)).collect()).unwrap();
        build_graph(&inst)
    }

    #[test]
    fn single_clause_gives_triangle_edges() {
        let g = graph_of(3, &[&[1, 2, 3]]);
        assert_eq!(g.edge_count(), 3);
        for (u, v) in [(1, 2), (1, 3), (2, 3)] {
            assert_eq!(g.multiplicity(u, v), 1);
            assert!(g.is_edge(v, u));
        }
    }

    #[test]
    fn shared_pair_counts_twice_regardless_of_polarity() {
        let g = graph_of(4, &[&[1, 2, 3], &[1, -2, 4]]);
        assert_eq!(g.multiplicity(1, 2), 2);
        assert_eq!(g.multiplicity(1, 3), 1);
        assert_eq!(g.multiplicity(2, 4), 1);
        assert_eq!(g.multiplicity(3, 4), 0);
        assert_eq!(g.edge_count(), 5);
    }

    #[test]
    fn repeated_variable_in_clause_collapses() {
        let g = graph_of(2, &[&[1, 1, 2]]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.multiplicity(1, 2), 1);
        assert!(!g.is_edge(1, 1));
        assert_eq!(g.neighbors(1), &[2]);
    }

    #[test]
    fn pair_penalty_examples() {
        let empty = ConstraintGraph::new(3);
        assert_eq!(empty.pair_penalty(&[1], 2), 0);

        let g = graph_of(3, &[&[1, 2, 3]]);
        assert_eq!(g.pair_penalty(&[1], 2), 1);

        let g = graph_of(5, &[&[1, 2, 4], &[1, 3, 5]]);
        assert_eq!(g.pair_penalty(&[2, 3], 1), 2);
    }

    #[test]
    fn add_clause_validates_input() {
        let mut g = ConstraintGraph::new(3);
        assert_eq!(
            g.add_clause(&[1, 4]).unwrap_err(),
            GraphError::VarOutOfRange { var: 4, n: 3 }
        );
        assert_eq!(
            g.add_clause(&[2, 1, 2]).unwrap_err(),
            GraphError::DuplicateVar { var: 2 }
        );
        assert_eq!(g.add_clause(&[3, 1]).unwrap(), vec![(1, 3)]);
        assert!(g.add_clause(&[1, 3]).unwrap().is_empty());
    }
}
