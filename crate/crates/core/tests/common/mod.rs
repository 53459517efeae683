//! Brute-force recomputations used as oracles by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use trisat_core::sat_core::{Clause, Instance, Literal, Polarity};
use trisat_core::ConstraintGraph;

pub fn brute_triangles(g: &ConstraintGraph) -> u64 {
    let n = g.n();
    let mut t = 0;
    for a in 1..=n {
        for b in a + 1..=n {
            if !g.is_edge(a, b) {
                continue;
            }
            for c in b + 1..=n {
                if g.is_edge(a, c) && g.is_edge(b, c) {
                    t += 1;
                }
            }
        }
    }
    t
}

pub fn brute_common(g: &ConstraintGraph, u: u32, w: u32) -> u32 {
    (1..=g.n())
        .filter(|&x| x != u && x != w && g.is_edge(u, x) && g.is_edge(w, x))
        .count() as u32
}

/// Pair multiplicities straight from a clause list.
pub fn brute_pair_counts(clauses: &[Vec<u32>]) -> HashMap<(u32, u32), u32> {
    let mut counts = HashMap::new();
    for clause in clauses {
        let mut vars = clause.clone();
        vars.sort_unstable();
        vars.dedup();
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                *counts.entry((vars[i], vars[j])).or_insert(0) += 1;
            }
        }
    }
    counts
}

pub fn brute_repeated_pairs(clauses: &[Vec<u32>]) -> usize {
    brute_pair_counts(clauses)
        .values()
        .filter(|&&c| c >= 2)
        .count()
}

fn with_clique(g: &ConstraintGraph, vars: &[u32]) -> ConstraintGraph {
    let mut g = g.clone();
    if !vars.is_empty() {
        g.add_clause(vars).unwrap();
    }
    g
}

/// `T(g + K(S ∪ {v})) − T(g + K(S))`.
pub fn brute_delta(g: &ConstraintGraph, partial: &[u32], v: u32) -> u64 {
    let base = brute_triangles(&with_clique(g, partial));
    let mut all = partial.to_vec();
    all.push(v);
    brute_triangles(&with_clique(g, &all)) - base
}

/// A clause of `len` distinct variables from `1..=n`.
pub fn random_vars<R: Rng>(rng: &mut R, n: u32, len: usize) -> Vec<u32> {
    let mut pool: Vec<u32> = (1..=n).collect();
    pool.shuffle(rng);
    pool.truncate(len);
    pool
}

/// Random CNF with clause lengths in `1..=max_len`.
pub fn random_instance<R: Rng>(rng: &mut R, n: u32, m: usize, max_len: usize) -> Instance {
    let clauses = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=max_len.min(n as usize));
            let lits = random_vars(rng, n, len)
                .into_iter()
                .map(|v| {
                    let polarity = if rng.gen_bool(0.5) {
                        Polarity::Positive
                    } else {
                        Polarity::Negative
                    };
                    Literal::new(v, polarity)
                })
                .collect();
            Clause::new(lits).unwrap()
        })
        .collect();
    Instance::new(n, clauses).unwrap()
}
