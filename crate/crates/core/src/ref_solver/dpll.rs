use std::time::Instant;

use super::{SolveLimits, SolveResult, SolveStatus};
use crate::sat_core::Instance;

/// Literal code: `2 * (var - 1) + negative`.
type Code = u32;

fn code_of(var: u32, positive: bool) -> Code {
    2 * (var - 1) + u32::from(!positive)
}

/// How often (in decisions) the wall clock is consulted.
const CLOCK_INTERVAL: u64 = 256;

fn lit_value(values: &[i8], lit: Code) -> i8 {
    let v = values[(lit >> 1) as usize];
    if lit & 1 == 0 {
        v
    } else {
        -v
    }
}

struct Level {
    trail_start: usize,
    decision: Code,
    flipped: bool,
}

struct Search {
    /// Per variable: 0 unassigned, 1 true, -1 false.
    values: Vec<i8>,
    clauses: Vec<Vec<Code>>,
    /// Clause indices watching each literal code.
    watches: Vec<Vec<usize>>,
    trail: Vec<Code>,
    queue_head: usize,
    levels: Vec<Level>,
    propagations: u64,
}

impl Search {
    fn value(&self, lit: Code) -> i8 {
        lit_value(&self.values, lit)
    }

    fn assign(&mut self, lit: Code) {
        self.values[(lit >> 1) as usize] = if lit & 1 == 0 { 1 } else { -1 };
        self.trail.push(lit);
    }

    /// Assigns an implied literal; false on immediate conflict.
    fn imply(&mut self, lit: Code) -> bool {
        match self.value(lit) {
            1 => true,
            -1 => false,
            _ => {
                self.assign(lit);
                self.propagations += 1;
                true
            }
        }
    }

    /// Unit propagation to fixpoint; false on conflict.
    fn propagate(&mut self) -> bool {
        while self.queue_head < self.trail.len() {
            let falsified = self.trail[self.queue_head] ^ 1;
            self.queue_head += 1;
            let mut watchers = std::mem::take(&mut self.watches[falsified as usize]);
            let mut i = 0;
            let mut conflict = false;
            while i < watchers.len() {
                let ci = watchers[i];
                let values = &self.values;
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let other = clause[0];
                let other_value = lit_value(values, other);
                if other_value == 1 {
                    i += 1;
                    continue;
                }
                if let Some(j) = (2..clause.len()).find(|&j| lit_value(values, clause[j]) != -1) {
                    clause.swap(1, j);
                    self.watches[clause[1] as usize].push(ci);
                    watchers.swap_remove(i);
                    continue;
                }
                i += 1;
                if other_value == -1 {
                    conflict = true;
                    break;
                }
                self.assign(other);
                self.propagations += 1;
            }
            self.watches[falsified as usize] = watchers;
            if conflict {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, trail_len: usize) {
        for &lit in &self.trail[trail_len..] {
            self.values[(lit >> 1) as usize] = 0;
        }
        self.trail.truncate(trail_len);
        self.queue_head = trail_len;
    }

    /// Chronological backtrack: flips the most recent unflipped decision.
    /// Returns false when the search space is exhausted.
    fn backtrack(&mut self) -> bool {
        while let Some(level) = self.levels.pop() {
            self.undo_to(level.trail_start);
            if !level.flipped {
                let flip = level.decision ^ 1;
                self.levels.push(Level {
                    trail_start: self.trail.len(),
                    decision: flip,
                    flipped: true,
                });
                self.assign(flip);
                return true;
            }
        }
        false
    }
}

/// Solves `instance` with plain DPLL. Only variables that occur in some
/// clause are branched on; the rest are reported false in the model.
pub fn solve(instance: &Instance, limits: SolveLimits) -> SolveResult {
    let start = Instant::now();
    let n = instance.n() as usize;
    let mut search = Search {
        values: vec![0; n],
        clauses: Vec::with_capacity(instance.m()),
        watches: vec![Vec::new(); 2 * n],
        trail: Vec::with_capacity(n),
        queue_head: 0,
        levels: Vec::new(),
        propagations: 0,
    };
    let mut occurs = vec![false; n];
    let mut units = Vec::new();

    for clause in instance.clauses() {
        let mut lits: Vec<Code> = clause
            .literals()
            .iter()
            .map(|l| code_of(l.var(), l.is_positive()))
            .collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            continue; // tautology
        }
        for &lit in &lits {
            occurs[(lit >> 1) as usize] = true;
        }
        if lits.len() == 1 {
            units.push(lits[0]);
            continue;
        }
        let ci = search.clauses.len();
        search.watches[lits[0] as usize].push(ci);
        search.watches[lits[1] as usize].push(ci);
        search.clauses.push(lits);
    }

    let finish = |search: &Search, status: SolveStatus, decisions: u64| {
        let model =
            (status == SolveStatus::Sat).then(|| search.values.iter().map(|&v| v == 1).collect());
        SolveResult {
            status,
            decisions,
            propagations: search.propagations,
            model,
        }
    };

    for &unit in &units {
        if !search.imply(unit) {
            return finish(&search, SolveStatus::Unsat, 0);
        }
    }

    let mut decisions = 0u64;
    let mut next_var = 0usize;
    loop {
        if !search.propagate() {
            if !search.backtrack() {
                return finish(&search, SolveStatus::Unsat, decisions);
            }
            next_var = 0;
            continue;
        }
        while next_var < n && (search.values[next_var] != 0 || !occurs[next_var]) {
            next_var += 1;
        }
        if next_var == n {
            return finish(&search, SolveStatus::Sat, decisions);
        }
        if limits.max_decisions.is_some_and(|max| decisions >= max) {
            return finish(&search, SolveStatus::LimitExceeded, decisions);
        }
        if let Some(budget) = limits.max_wall_time {
            if decisions.is_multiple_of(CLOCK_INTERVAL) && start.elapsed() >= budget {
                return finish(&search, SolveStatus::LimitExceeded, decisions);
            }
        }
        decisions += 1;
        let lit = code_of(next_var as u32 + 1, true);
        search.levels.push(Level {
            trail_start: search.trail.len(),
            decision: lit,
            flipped: false,
        });
        search.assign(lit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ref_solver::check_model;
    use crate::sat_core::Clause;
    use std::time::Duration;

    fn inst(n: u32, clauses: &[&[i64]]) -> Instance {
        Instance::new(n, clauses.iter().map(|c| Clause::from_dimacs(c)).collect()).unwrap()
    }

    #[test]
    fn single_unit_needs_no_decision() {
        let r = solve(&inst(1, &[&[1]]), SolveLimits::unlimited());
        assert_eq!(r.status, SolveStatus::Sat);
        assert_eq!(r.decisions, 0);
        assert_eq!(r.propagations, 1);
        assert_eq!(r.model, Some(vec![true]));
    }

    #[test]
    fn contradictory_units() {
        let r = solve(&inst(1, &[&[1], &[-1]]), SolveLimits::unlimited());
        assert_eq!(r.status, SolveStatus::Unsat);
        assert_eq!(r.decisions, 0);
        assert!(r.model.is_none());
    }

    #[test]
    fn propagation_chain_decides_without_branching() {
        let i = inst(4, &[&[1], &[-1, 2], &[-2, 3], &[-3, -4]]);
        let r = solve(&i, SolveLimits::unlimited());
        assert_eq!(
            (r.status, r.decisions, r.propagations),
            (SolveStatus::Sat, 0, 4)
        );
        assert_eq!(r.model, Some(vec![true, true, true, false]));
    }

    #[test]
    fn all_binary_clauses_unsat_after_one_decision() {
        let i = inst(2, &[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]);
        let r = solve(&i, SolveLimits::unlimited());
        assert_eq!(r.status, SolveStatus::Unsat);
        // x1 = true conflicts; x1 = false is the flipped branch and conflicts too.
        assert_eq!(r.decisions, 1);
    }

    #[test]
    fn positive_phase_first() {
        // Every occurring variable is branched on, even once all clauses are
        // satisfied.
        let r = solve(&inst(3, &[&[1, 2, 3]]), SolveLimits::unlimited());
        assert_eq!(r.decisions, 3);
        assert_eq!(r.model, Some(vec![true, true, true]));
    }

    #[test]
    fn backtracks_to_negative_phase() {
        let i = inst(2, &[&[-1, 2], &[-1, -2]]);
        let r = solve(&i, SolveLimits::unlimited());
        assert_eq!(r.status, SolveStatus::Sat);
        assert!(check_model(&i, r.model.as_ref().unwrap()).unwrap());
        assert!(!r.model.unwrap()[0]);
    }

    #[test]
    fn tautologies_and_duplicate_literals() {
        let i = inst(2, &[&[1, -1], &[2, 2]]);
        let r = solve(&i, SolveLimits::unlimited());
        assert_eq!(r.status, SolveStatus::Sat);
        assert_eq!(r.decisions, 0);
        assert_eq!(r.model, Some(vec![false, true]));
    }

    #[test]
    fn decision_limit() {
        // Pigeonhole 4 into 3 needs far more than two decisions.
        let mut clauses: Vec<Vec<i64>> = Vec::new();
        let var = |p: i64, h: i64| p * 3 + h + 1;
        for p in 0..4 {
            clauses.push((0..3).map(|h| var(p, h)).collect());
        }
        for h in 0..3 {
            for p in 0..4 {
                for q in p + 1..4 {
                    clauses.push(vec![-var(p, h), -var(q, h)]);
                }
            }
        }
        let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
        let php = inst(12, &refs);
        let r = solve(&php, SolveLimits::decisions(2));
        assert_eq!(r.status, SolveStatus::LimitExceeded);
        assert_eq!(r.decisions, 2);
        let full = solve(&php, SolveLimits::unlimited());
        assert_eq!(full.status, SolveStatus::Unsat);
        assert!(full.decisions > 2);
        let timed = solve(
            &php,
            SolveLimits {
                max_decisions: None,
                max_wall_time: Some(Duration::ZERO),
            },
        );
        assert_eq!(timed.status, SolveStatus::LimitExceeded);
    }

    #[test]
    fn unused_variables_are_not_branched() {
        let r = solve(&inst(5, &[&[2, 4]]), SolveLimits::unlimited());
        assert_eq!(r.decisions, 2);
        assert_eq!(r.model, Some(vec![false, true, false, true, false]));
    }
}
