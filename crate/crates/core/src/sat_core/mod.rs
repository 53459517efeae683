//! Instance data model: literals, clauses, instances and DIMACS CNF I/O.
//!
//! Variables are 1-indexed throughout, matching DIMACS. Clause literal order
//! is preserved from construction to serialization so that generator output
//! is byte-reproducible.

mod dimacs;

use std::fmt;

use thiserror::Error;

pub use dimacs::{parse_dimacs, write_dimacs, write_dimacs_with_comment, DimacsError};

/// Sign of a literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flipped(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Polarity::Positive
    }
}

/// A variable or its negation. `var` is always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    var: u32,
    polarity: Polarity,
}

impl Literal {
    /// Panics if `var` is 0.
    pub fn new(var: u32, polarity: Polarity) -> Literal {
        assert!(var >= 1, "variables are 1-indexed");
        Literal { var, polarity }
    }

    pub fn positive(var: u32) -> Literal {
        Literal::new(var, Polarity::Positive)
    }

    pub fn negative(var: u32) -> Literal {
        Literal::new(var, Polarity::Negative)
    }

    /// Builds a literal from its DIMACS integer form. Returns `None` for 0 or
    /// values that do not fit a `u32` variable index.
    pub fn from_dimacs(value: i64) -> Option<Literal> {
        if value == 0 {
            return None;
        }
        let var = u32::try_from(value.unsigned_abs()).ok()?;
        let polarity = if value > 0 {
            Polarity::Positive
        } else {
            Polarity::Negative
        };
        Some(Literal { var, polarity })
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn polarity(self) -> Polarity {
        self.polarity
    }

    pub fn is_positive(self) -> bool {
        self.polarity.is_positive()
    }

    pub fn negated(self) -> Literal {
        Literal {
            var: self.var,
            polarity: self.polarity.flipped(),
        }
    }

    pub fn with_polarity(self, polarity: Polarity) -> Literal {
        Literal {
            var: self.var,
            polarity,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        match self.polarity {
            Polarity::Positive => i64::from(self.var),
            Polarity::Negative => -i64::from(self.var),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals in insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Returns `None` for an empty literal list.
    pub fn new(literals: Vec<Literal>) -> Option<Clause> {
        if literals.is_empty() {
            None
        } else {
            Some(Clause { literals })
        }
    }

    /// Convenience constructor from DIMACS integers. Panics on an empty slice
    /// or a zero entry; intended for tests and literals known to be valid.
    pub fn from_dimacs(values: &[i64]) -> Clause {
        let literals = values
            .iter()
            .map(|&v| Literal::from_dimacs(v).expect("nonzero literal"))
            .collect();
        Clause::new(literals).expect("non-empty clause")
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.literals.iter().map(|l| l.var())
    }

    /// Order-insensitive identity of the clause: the sorted multiset of its
    /// signed literals.
    pub fn key(&self) -> ClauseKey {
        clause_key(self)
    }
}

/// Canonical identifier of a clause up to literal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClauseKey(Vec<i64>);

impl ClauseKey {
    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

pub fn clause_key(clause: &Clause) -> ClauseKey {
    let mut values: Vec<i64> = clause.literals.iter().map(|l| l.to_dimacs()).collect();
    values.sort_unstable();
    ClauseKey(values)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("clause {clause} uses variable {var} but the instance has {n} variables")]
    VarOutOfRange { clause: usize, var: u32, n: u32 },
}

/// A CNF formula over variables `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: u32,
    clauses: Vec<Clause>,
    declared_arity: usize,
}

impl Instance {
    pub fn new(n: u32, clauses: Vec<Clause>) -> Result<Instance, InstanceError> {
        for (i, clause) in clauses.iter().enumerate() {
            if let Some(var) = clause.vars().find(|&v| v > n) {
                return Err(InstanceError::VarOutOfRange { clause: i, var, n });
            }
        }
        let declared_arity = clauses.iter().map(Clause::len).max().unwrap_or(0);
        Ok(Instance {
            n,
            clauses,
            declared_arity,
        })
    }

    /// Number of variables.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of clauses.
    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Length of the longest clause.
    pub fn arity(&self) -> usize {
        self.declared_arity
    }

    pub fn into_clauses(self) -> Vec<Clause> {
        self.clauses
    }

    /// Per-variable occurrence counts, indexed by `var - 1`.
    pub fn occurrence_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n as usize];
        for lit in self.clauses.iter().flat_map(|c| c.literals.iter()) {
            counts[lit.var as usize - 1] += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn key_ignores_literal_order() {
        let a = Clause::from_dimacs(&[1, -2, 3]);
        let b = Clause::from_dimacs(&[3, 1, -2]);
        assert_eq!(a.key(), b.key());
    }

    #[test]
    fn key_respects_polarity() {
        let a = Clause::from_dimacs(&[1, -2, 3]);
        let b = Clause::from_dimacs(&[1, 2, 3]);
        assert_ne!(a.key(), b.key());
    }

    #[test]
    fn key_is_a_multiset() {
        let a = Clause::from_dimacs(&[1, 1, 2]);
        let b = Clause::from_dimacs(&[1, 2]);
        assert_ne!(a.key(), b.key());
    }

    #[test]
    fn instance_rejects_out_of_range_var() {
        let err = Instance::new(2, vec![Clause::from_dimacs(&[1, -3])]).unwrap_err();
        assert_eq!(
            err,
            InstanceError::VarOutOfRange {
                clause: 0,
                var: 3,
                n: 2
            }
        );
    }

    #[test]
    fn arity_is_longest_clause() {
        let inst = Instance::new(
            4,
            vec![Clause::from_dimacs(&[1]), Clause::from_dimacs(&[1, 2, -4])],
        )
        .unwrap();
        assert_eq!(inst.arity(), 3);
        assert_eq!(inst.occurrence_counts(), vec![2, 1, 0, 1]);
    }

    #[test]
    fn empty_clause_is_rejected() {
        assert!(Clause::new(Vec::new()).is_none());
    }

    proptest! {
        #[test]
        fn key_invariant_under_permutation(
            lits in prop::collection::vec((1i64..20, any::<bool>()), 1..8),
            shuffle_seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let values: Vec<i64> = lits.iter().map(|&(v, neg)| if neg { -v } else { v }).collect();
            let mut permuted = values.clone();
            permuted.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(shuffle_seed));
            let a = Clause::from_dimacs(&values);
            let b = Clause::from_dimacs(&permuted);
            prop_assert_eq!(a.key(), b.key());
        }

        #[test]
        fn key_equality_matches_sorted_multiset(
            a in prop::collection::vec(prop_oneof![-5i64..0, 1i64..6], 1..5),
            b in prop::collection::vec(prop_oneof![-5i64..0, 1i64..6], 1..5),
        ) {
            let mut sa = a.clone();
            let mut sb = b.clone();
            sa.sort_unstable();
            sb.sort_unstable();
            let same = Clause::from_dimacs(&a).key() == Clause::from_dimacs(&b).key();
            prop_assert_eq!(same, sa == sb);
        }
    }
}
