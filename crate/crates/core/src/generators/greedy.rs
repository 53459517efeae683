//! Balanced and No-Triangle construction.
//!
//! Clauses are filled slot by slot. For each slot the candidates are the
//! variables not yet in the current clause, scanned in ascending index, and
//! the chosen variable minimizes, in order:
//!
//! 1. its occurrence count so far,
//! 2. the number of clause partners it is already adjacent to (pair penalty),
//! 3. for No-Triangle only, the number of triangles it would close,
//!
//! with any remaining tie resolved by a uniform draw from the generator rng.
//! The graph (and for No-Triangle the triangle ledger) is updated after every
//! placement.
//!
//! Polarities alternate per variable starting from a fair coin. The coins are
//! drawn from the rng before construction starts (one per variable, ascending
//! index), which makes every literal's sign known when it is placed. On the
//! last slot of a clause, least-used candidates that would complete a clause
//! already emitted are dropped; if every least-used candidate would, the
//! duplicate is accepted and counted rather than breaking the balance.

use std::collections::HashSet;

use rand::Rng;

use super::{alternate_polarities, rng_from_seed, GenError, GenParams, GenRng, GeneratorKind};
use crate::constraint_graph::{self, ConstraintGraph, TriangleLedger};
use crate::sat_core::{Clause, ClauseKey, Instance, Literal, Polarity};

/// Mutable state of one greedy generation run.
#[derive(Debug, Clone)]
pub struct GenState {
    /// Occurrences so far, indexed by `var - 1`.
    pub occurrences: Vec<u32>,
    /// Whether the first occurrence of each variable is negative.
    pub first_negative: Vec<bool>,
    pub graph: ConstraintGraph,
    /// Present only for No-Triangle.
    pub ledger: Option<TriangleLedger>,
    /// Keys of the completed clauses.
    pub clause_keys: HashSet<ClauseKey>,
    pub rng: GenRng,
}

impl GenState {
    pub fn occurrence(&self, var: u32) -> u32 {
        self.occurrences[var as usize - 1]
    }

    /// Sign the next occurrence of `var` will carry.
    pub fn next_literal(&self, var: u32) -> Literal {
        let idx = var as usize - 1;
        let negative = self.first_negative[idx] ^ (self.occurrences[idx] % 2 == 1);
        Literal::new(
            var,
            if negative {
                Polarity::Negative
            } else {
                Polarity::Positive
            },
        )
    }

    pub fn pair_penalty(&self, partial: &[u32], var: u32) -> usize {
        self.graph.pair_penalty(partial, var)
    }

    /// Triangles closed by adding `var` to `partial`; 0 without a ledger.
    pub fn triangle_delta(&self, partial: &[u32], var: u32) -> u64 {
        match &self.ledger {
            Some(ledger) => constraint_graph::triangle_delta(&self.graph, ledger, partial, var),
            None => 0,
        }
    }
}

/// Outcome of one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub clause: usize,
    pub var: u32,
    /// Occurrence count of `var` before it was placed.
    pub occurrences: u32,
    pub pair_penalty: usize,
    /// Always 0 for Balanced.
    pub triangle_delta: u64,
    /// Candidates left after all deterministic tie-breaks.
    pub ties: usize,
    /// The placement completed a clause identical to an earlier one.
    pub duplicate: bool,
}

/// Step-wise Balanced / No-Triangle generator.
#[derive(Debug, Clone)]
pub struct GreedyGenerator {
    params: GenParams,
    state: GenState,
    clauses: Vec<Clause>,
    current: Vec<u32>,
    current_lits: Vec<Literal>,
    duplicates: usize,
    ties: Vec<u32>,
}

impl GreedyGenerator {
    /// `params.kind` must be Balanced or NoTriangle.
    pub fn new(params: &GenParams) -> Result<GreedyGenerator, GenError> {
        params.validate()?;
        assert!(
            params.kind != GeneratorKind::Random,
            "greedy construction needs a balanced or no-triangle kind"
        );
        let mut rng = rng_from_seed(params.seed);
        let first_negative = (0..params.n).map(|_| rng.gen_bool(0.5)).collect();
        let ledger = (params.kind == GeneratorKind::NoTriangle).then(TriangleLedger::new);
        Ok(GreedyGenerator {
            params: *params,
            state: GenState {
                occurrences: vec![0; params.n as usize],
                first_negative,
                graph: ConstraintGraph::new(params.n),
                ledger,
                clause_keys: HashSet::with_capacity(params.m),
                rng,
            },
            clauses: Vec::with_capacity(params.m),
            current: Vec::with_capacity(params.k),
            current_lits: Vec::with_capacity(params.k),
            duplicates: 0,
            ties: Vec::new(),
        })
    }

    pub fn state(&self) -> &GenState {
        &self.state
    }

    /// Variables already placed in the clause under construction.
    pub fn partial(&self) -> &[u32] {
        &self.current
    }

    pub fn completed_clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Duplicate clauses emitted so far.
    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    pub fn is_complete(&self) -> bool {
        self.clauses.len() == self.params.m
    }

    /// Whether adding `var` now would complete a clause already emitted.
    pub fn completes_duplicate(&self, var: u32) -> bool {
        if self.current.len() + 1 != self.params.k {
            return false;
        }
        let mut lits = self.current_lits.clone();
        lits.push(self.state.next_literal(var));
        let key = Clause::new(lits).expect("non-empty").key();
        self.state.clause_keys.contains(&key)
    }

    /// Variables eligible for the next slot: not in the current clause, least
    /// used, and not completing a duplicate unless that empties the set.
    pub fn eligible(&self) -> Vec<u32> {
        let state = &self.state;
        let free = |v: &u32| !self.current.contains(v);
        let min_occ = (1..=self.params.n)
            .filter(free)
            .map(|v| state.occurrence(v))
            .min()
            .expect("n ≥ k leaves a free variable");
        let least_used: Vec<u32> = (1..=self.params.n)
            .filter(|v| free(v) && state.occurrence(*v) == min_occ)
            .collect();
        let fresh: Vec<u32> = least_used
            .iter()
            .copied()
            .filter(|&v| !self.completes_duplicate(v))
            .collect();
        if fresh.is_empty() {
            least_used
        } else {
            fresh
        }
    }

    /// Fills the next slot. Returns `None` once all `m` clauses are built.
    pub fn place_next(&mut self) -> Option<Placement> {
        if self.is_complete() {
            return None;
        }
        let candidates = self.eligible();
        let state = &self.state;
        let current = &self.current;

        self.ties.clear();
        let mut best = (usize::MAX, u64::MAX);
        for v in candidates {
            let penalty = state.pair_penalty(current, v);
            if penalty > best.0 {
                continue;
            }
            let score = (penalty, state.triangle_delta(current, v));
            if score < best {
                best = score;
                self.ties.clear();
            }
            if score == best {
                self.ties.push(v);
            }
        }

        let var = if self.ties.len() == 1 {
            self.ties[0]
        } else {
            self.ties[self.state.rng.gen_range(0..self.ties.len())]
        };
        let mut placement = Placement {
            clause: self.clauses.len(),
            var,
            occurrences: self.state.occurrence(var),
            pair_penalty: best.0,
            triangle_delta: best.1,
            ties: self.ties.len(),
            duplicate: false,
        };
        placement.duplicate = self.commit(var);
        Some(placement)
    }

    /// Returns true if the placement completed a duplicate clause.
    fn commit(&mut self, var: u32) -> bool {
        let state = &mut self.state;
        self.current_lits.push(state.next_literal(var));
        state.occurrences[var as usize - 1] += 1;
        for &u in &self.current {
            let edge = [u, var];
            match &mut state.ledger {
                Some(ledger) => {
                    constraint_graph::add_clause(&mut state.graph, ledger, &edge)
                        .expect("distinct in-range variables");
                }
                None => {
                    state
                        .graph
                        .add_clause(&edge)
                        .expect("distinct in-range variables");
                }
            }
        }
        self.current.push(var);
        if self.current.len() < self.params.k {
            return false;
        }
        self.current.clear();
        let clause = Clause::new(std::mem::take(&mut self.current_lits)).expect("k ≥ 2");
        let duplicate = !state.clause_keys.insert(clause.key());
        if duplicate {
            self.duplicates += 1;
        }
        self.clauses.push(clause);
        duplicate
    }

    /// Builds any remaining clauses.
    pub fn finish(mut self) -> Instance {
        while self.place_next().is_some() {}
        Instance::new(self.params.n, self.clauses).expect("variables in 1..=n")
    }

    /// The finished instance's variable layout with all-positive literals.
    pub fn skeleton(instance: &Instance) -> Instance {
        let clauses = instance
            .clauses()
            .iter()
            .map(|c| Clause::new(c.vars().map(Literal::positive).collect()).expect("non-empty"))
            .collect();
        Instance::new(instance.n(), clauses).expect("same variables")
    }

    /// Re-applies the pre-drawn polarity coins to a skeleton; used to check
    /// that construction-time signs equal a separate alternation pass.
    pub fn repolarize(&self, skeleton: &Instance) -> Instance {
        alternate_polarities(skeleton, &self.state.first_negative)
    }
}

fn run(params: &GenParams, kind: GeneratorKind) -> Result<Instance, GenError> {
    let params = GenParams { kind, ..*params };
    Ok(GreedyGenerator::new(&params)?.finish())
}

/// Balanced SAT: least-used variable first, ties broken by pair penalty.
pub fn gen_balanced(params: &GenParams) -> Result<Instance, GenError> {
    run(params, GeneratorKind::Balanced)
}

/// No-Triangle SAT: Balanced SAT with an extra tie-break on closed triangles.
pub fn gen_no_triangle(params: &GenParams) -> Result<Instance, GenError> {
    run(params, GeneratorKind::NoTriangle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kind: GeneratorKind, k: usize, n: u32, m: usize, seed: u64) -> GenParams {
        GenParams::new(kind, k, n, m, seed)
    }

    #[test]
    fn six_vars_four_clauses_are_perfectly_balanced() {
        for kind in [GeneratorKind::Balanced, GeneratorKind::NoTriangle] {
            for seed in 0..20 {
                let inst = GreedyGenerator::new(&params(kind, 3, 6, 4, seed))
                    .unwrap()
                    .finish();
                assert_eq!(inst.m(), 4);
                assert_eq!(inst.occurrence_counts(), vec![2; 6]);
                for var in 1..=6 {
                    let pos = inst
                        .clauses()
                        .iter()
                        .flat_map(|c| c.literals())
                        .filter(|l| l.var() == var && l.is_positive())
                        .count();
                    assert_eq!(pos, 1, "{kind} seed {seed} var {var}");
                }
            }
        }
    }

    #[test]
    fn first_row_uses_every_variable_once() {
        let mut g = GreedyGenerator::new(&params(GeneratorKind::Balanced, 3, 9, 10, 1)).unwrap();
        for _ in 0..9 {
            let p = g.place_next().unwrap();
            assert_eq!(p.occurrences, 0);
        }
        assert_eq!(g.state().occurrences, vec![1; 9]);
    }

    #[test]
    fn balanced_never_consults_triangles() {
        let mut g = GreedyGenerator::new(&params(GeneratorKind::Balanced, 3, 20, 30, 4)).unwrap();
        while let Some(p) = g.place_next() {
            assert_eq!(p.triangle_delta, 0);
        }
        assert!(g.state().ledger.is_none());
    }

    #[test]
    fn construction_signs_match_alternation_pass() {
        for kind in [GeneratorKind::Balanced, GeneratorKind::NoTriangle] {
            let g = GreedyGenerator::new(&params(kind, 4, 30, 70, 8)).unwrap();
            let probe = g.clone();
            let inst = g.finish();
            assert_eq!(
                probe.repolarize(&GreedyGenerator::skeleton(&inst)),
                inst,
                "{kind}"
            );
        }
    }

    #[test]
    fn avoidable_duplicates_are_avoided() {
        // n = 4, k = 3: 32 distinct clauses, only a handful requested.
        for seed in 0..50 {
            let g = GreedyGenerator::new(&params(GeneratorKind::Balanced, 3, 4, 6, seed)).unwrap();
            let mut probe = g.clone();
            while probe.place_next().is_some() {}
            assert_eq!(probe.duplicates(), 0, "seed {seed}");
        }
    }

    #[test]
    fn forced_duplicates_are_counted() {
        // n = k: every clause holds every variable and signs alternate, so only
        // two distinct clauses exist.
        let mut g = GreedyGenerator::new(&params(GeneratorKind::NoTriangle, 3, 3, 5, 2)).unwrap();
        let mut flags = Vec::new();
        while let Some(p) = g.place_next() {
            if g.partial().is_empty() {
                flags.push(p.duplicate);
            }
        }
        assert_eq!(flags, vec![false, false, true, true, true]);
        assert_eq!(g.duplicates(), 3);
    }

    #[test]
    #[should_panic(expected = "greedy construction")]
    fn random_kind_is_not_greedy() {
        let _ = GreedyGenerator::new(&params(GeneratorKind::Random, 3, 6, 4, 0));
    }
}
