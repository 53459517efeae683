use rand::Rng;

use crate::sat_core::{Clause, Instance, Literal, Polarity};

/// Assigns alternating polarities to a skeleton instance.
///
/// Occurrences are ordered by clause, then by position in the clause. Each
/// variable that occurs at all gets one fair coin (drawn in ascending variable
/// order) deciding whether its first occurrence is negative; every later
/// occurrence negates the previous one. Input polarities are ignored.
pub fn assign_polarities<R: Rng + ?Sized>(skeleton: &Instance, rng: &mut R) -> Instance {
    let first_negative: Vec<bool> = skeleton
        .occurrence_counts()
        .iter()
        .map(|&c| c > 0 && rng.gen_bool(0.5))
        .collect();
    alternate_polarities(skeleton, &first_negative)
}

/// Alternation with given first signs (`first_negative[var - 1]`).
pub fn alternate_polarities(skeleton: &Instance, first_negative: &[bool]) -> Instance {
    let mut next: Vec<Polarity> = first_negative
        .iter()
        .map(|&neg| {
            if neg {
                Polarity::Negative
            } else {
                Polarity::Positive
            }
        })
        .collect();

    let clauses = skeleton
        .clauses()
        .iter()
        .map(|clause| {
            let literals = clause
                .literals()
                .iter()
                .map(|lit| {
                    let slot = &mut next[lit.var() as usize - 1];
                    let polarity = *slot;
                    *slot = polarity.flipped();
                    Literal::new(lit.var(), polarity)
                })
                .collect();
            Clause::new(literals).expect("skeleton clauses are non-empty")
        })
        .collect();
    Instance::new(skeleton.n(), clauses).expect("same variables as the skeleton")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::rng_from_seed;

    fn skeleton(n: u32, clauses: &[&[i64]]) -> Instance {
        Instance::new(n, clauses.iter().map(|c| Clause::from_dimacs(c)).collect()).unwrap()
    }

    fn signs_of(inst: &Instance, var: u32) -> Vec<bool> {
        inst.clauses()
            .iter()
            .flat_map(|c| c.literals())
            .filter(|l| l.var() == var)
            .map(|l| l.is_positive())
            .collect()
    }

    #[test]
    fn four_occurrences_alternate() {
        let sk = skeleton(2, &[&[1, 2], &[1], &[2, 1], &[1]]);
        let mut seen_first = [false; 2];
        for seed in 0..64 {
            let out = assign_polarities(&sk, &mut rng_from_seed(seed));
            let signs = signs_of(&out, 1);
            assert!(
                signs == [true, false, true, false] || signs == [false, true, false, true],
                "{signs:?}"
            );
            seen_first[signs[0] as usize] = true;
        }
        assert_eq!(seen_first, [true, true]);
    }

    #[test]
    fn single_occurrence_takes_both_signs() {
        let sk = skeleton(1, &[&[1]]);
        let positives = (0..400)
            .filter(|&seed| signs_of(&assign_polarities(&sk, &mut rng_from_seed(seed)), 1)[0])
            .count();
        assert!((140..=260).contains(&positives), "{positives}");
    }

    #[test]
    fn structure_is_preserved() {
        let sk = skeleton(4, &[&[1, 2, 3], &[3, 4, 1], &[2, 4, 1]]);
        let out = assign_polarities(&sk, &mut rng_from_seed(3));
        for (a, b) in sk.clauses().iter().zip(out.clauses()) {
            assert!(a.vars().eq(b.vars()));
        }
        // Unused variable 5 would stay untouched; here every var is balanced.
        for var in 1..=4 {
            let signs = signs_of(&out, var);
            let pos = signs.iter().filter(|&&s| s).count() as i64;
            assert!((2 * pos - signs.len() as i64).abs() <= 1);
        }
    }
}
