use std::collections::HashSet;

use rand::Rng;

use super::{rng_from_seed, GenError, GenParams};
use crate::sat_core::{Clause, Instance, Literal, Polarity};

/// Whole-clause redraws allowed per clause before giving up.
pub const MAX_CLAUSE_ATTEMPTS: usize = 10_000;

/// Uniform random k-SAT.
///
/// Each literal is drawn from the `2n` signed literals; a literal whose
/// variable is already in the clause is redrawn, and a completed clause equal
/// (up to literal order) to an earlier one is discarded and drawn again.
pub fn gen_random(params: &GenParams) -> Result<Instance, GenError> {
    params.validate()?;
    let available = params.distinct_clause_count();
    if (params.m as u128) > available {
        return Err(GenError::ClauseSpaceExhausted {
            k: params.k,
            n: params.n,
            m: params.m,
            available,
        });
    }

    let mut rng = rng_from_seed(params.seed);
    let mut seen = HashSet::with_capacity(params.m);
    let mut clauses = Vec::with_capacity(params.m);
    let mut literals: Vec<Literal> = Vec::with_capacity(params.k);
    let signed = 2 * params.n;

    for index in 0..params.m {
        let mut attempts = 0;
        loop {
            if attempts == MAX_CLAUSE_ATTEMPTS {
                return Err(GenError::RetriesExhausted {
                    clause: index,
                    attempts,
                });
            }
            attempts += 1;
            literals.clear();
            while literals.len() < params.k {
                let draw = rng.gen_range(0..signed);
                let var = draw / 2 + 1;
                if literals.iter().any(|l| l.var() == var) {
                    continue;
                }
                let polarity = if draw % 2 == 0 {
                    Polarity::Positive
                } else {
                    Polarity::Negative
                };
                literals.push(Literal::new(var, polarity));
            }
            let clause = Clause::new(literals.clone()).expect("k ≥ 2");
            if seen.insert(clause.key()) {
                clauses.push(clause);
                break;
            }
        }
    }
    Ok(Instance::new(params.n, clauses).expect("variables drawn from 1..=n"))
}
