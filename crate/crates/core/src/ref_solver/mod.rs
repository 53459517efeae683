//! Reference solver and satisfiability oracles.
//!
//! [`solve`] is a plain DPLL search: unit propagation to fixpoint, static
//! branching on the lowest-indexed unassigned variable with the positive phase
//! first, and chronological backtracking. There is no learning, no restarts
//! and no pure-literal rule, so decision counts are a deterministic function
//! of the instance.

mod dpll;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sat_core::Instance;

pub use dpll::solve;

/// Largest variable count [`brute_force_sat`] accepts.
pub const BRUTE_FORCE_MAX_VARS: u32 = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Sat,
    Unsat,
    LimitExceeded,
}

impl SolveStatus {
    pub fn name(self) -> &'static str {
        match self {
            SolveStatus::Sat => "sat",
            SolveStatus::Unsat => "unsat",
            SolveStatus::LimitExceeded => "limit_exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Branching choices. The second branch taken after backtracking is not
    /// counted.
    pub decisions: u64,
    /// Assignments forced by unit propagation, including top-level units.
    pub propagations: u64,
    /// Satisfying assignment indexed by `var - 1`, present iff `status` is sat.
    pub model: Option<Vec<bool>>,
}

/// Optional budgets for a search. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveLimits {
    pub max_decisions: Option<u64>,
    pub max_wall_time: Option<Duration>,
}

impl SolveLimits {
    pub fn unlimited() -> SolveLimits {
        SolveLimits::default()
    }

    pub fn decisions(max: u64) -> SolveLimits {
        SolveLimits {
            max_decisions: Some(max),
            max_wall_time: None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("assignment covers {got} variables, instance has {expected}")]
    IncompleteAssignment { expected: u32, got: usize },
    #[error("brute force is limited to {max} variables, instance has {n}")]
    TooManyVariables { n: u32, max: u32 },
}

/// True iff every clause has a literal made true by `assignment`
/// (indexed by `var - 1`).
pub fn check_model(instance: &Instance, assignment: &[bool]) -> Result<bool, SolverError> {
    if assignment.len() != instance.n() as usize {
        return Err(SolverError::IncompleteAssignment {
            expected: instance.n(),
            got: assignment.len(),
        });
    }
    Ok(instance.clauses().iter().all(|clause| {
        clause
            .literals()
            .iter()
            .any(|lit| assignment[lit.var() as usize - 1] == lit.is_positive())
    }))
}

/// Exhaustive satisfiability check over all `2^n` assignments.
pub fn brute_force_sat(instance: &Instance) -> Result<bool, SolverError> {
    let n = instance.n();
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(SolverError::TooManyVariables {
            n,
            max: BRUTE_FORCE_MAX_VARS,
        });
    }
    let masks: Vec<(u32, u32)> = instance
        .clauses()
        .iter()
        .map(|clause| {
            clause.literals().iter().fold((0, 0), |(pos, neg), lit| {
                let bit = 1u32 << (lit.var() - 1);
                if lit.is_positive() {
                    (pos | bit, neg)
                } else {
                    (pos, neg | bit)
                }
            })
        })
        .collect();
    Ok((0..1u32 << n).any(|a| {
        masks
            .iter()
            .all(|&(pos, neg)| a & pos != 0 || !a & neg != 0)
    }))
}
