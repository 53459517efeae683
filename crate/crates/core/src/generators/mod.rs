//! Instance generators.
//!
//! * [`gen_random`]: every literal drawn uniformly from the `2n` signed
//!   literals, distinct variables within a clause, no clause repeated.
//! * [`gen_balanced`]: greedy slot-by-slot construction picking the least
//!   used variable, breaking ties by the number of repeated pairs it would
//!   add, then at random. Polarities alternate per variable, and a clause
//!   identical to an earlier one is avoided whenever balance allows.
//! * [`gen_no_triangle`]: as balanced, with an extra tie-break on the number
//!   of constraint-graph triangles the variable would close.
//!
//! All generators are deterministic functions of [`GenParams`]. The random
//! stream is ChaCha8 seeded with `seed` through `SeedableRng::seed_from_u64`
//! (rand 0.8 value-stable sampling), so output is identical across runs and
//! platforms.

mod greedy;
mod polarity;
mod random;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sat_core::Instance;

pub use greedy::{gen_balanced, gen_no_triangle, GenState, GreedyGenerator, Placement};
pub use polarity::{alternate_polarities, assign_polarities};
pub use random::{gen_random, MAX_CLAUSE_ATTEMPTS};

/// Pseudo-random stream used by every generator.
pub type GenRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    Random,
    Balanced,
    NoTriangle,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 3] = [
        GeneratorKind::Random,
        GeneratorKind::Balanced,
        GeneratorKind::NoTriangle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Random => "random",
            GeneratorKind::Balanced => "balanced",
            GeneratorKind::NoTriangle => "no-triangle",
        }
    }

    /// Stable numeric tag mixed into derived seeds.
    pub fn seed_tag(self) -> u64 {
        match self {
            GeneratorKind::Random => 1,
            GeneratorKind::Balanced => 2,
            GeneratorKind::NoTriangle => 3,
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(GeneratorKind::Random),
            "balanced" => Ok(GeneratorKind::Balanced),
            "no-triangle" | "no_triangle" | "notriangle" => Ok(GeneratorKind::NoTriangle),
            other => Err(GenError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("k must be ≥ 2 (got {0})")]
    ArityTooSmall(usize),
    #[error("n must be ≥ k (n = {n}, k = {k})")]
    TooFewVariables { n: u32, k: usize },
    #[error("m must be ≥ 1")]
    NoClauses,
    #[error("only {available} distinct {k}-clauses exist over {n} variables, {m} requested")]
    ClauseSpaceExhausted {
        k: usize,
        n: u32,
        m: usize,
        available: u128,
    },
    #[error("gave up after {attempts} attempts to draw a fresh clause #{clause}")]
    RetriesExhausted { clause: usize, attempts: usize },
    #[error("unknown generator kind `{0}` (expected random, balanced or no-triangle)")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenParams {
    pub kind: GeneratorKind,
    pub k: usize,
    pub n: u32,
    pub m: usize,
    pub seed: u64,
}

impl GenParams {
    pub fn new(kind: GeneratorKind, k: usize, n: u32, m: usize, seed: u64) -> GenParams {
        GenParams {
            kind,
            k,
            n,
            m,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.k < 2 {
            return Err(GenError::ArityTooSmall(self.k));
        }
        if (self.n as usize) < self.k {
            return Err(GenError::TooFewVariables {
                n: self.n,
                k: self.k,
            });
        }
        if self.m == 0 {
            return Err(GenError::NoClauses);
        }
        Ok(())
    }

    /// `C(n, k) * 2^k`, saturating.
    pub fn distinct_clause_count(&self) -> u128 {
        let mut binom: u128 = 1;
        for i in 0..self.k as u128 {
            binom = binom.saturating_mul(u128::from(self.n) - i) / (i + 1);
        }
        binom.saturating_mul(1u128.checked_shl(self.k as u32).unwrap_or(u128::MAX))
    }
}

/// Runs the generator selected by `params.kind`.
pub fn generate(params: &GenParams) -> Result<Instance, GenError> {
    match params.kind {
        GeneratorKind::Random => gen_random(params),
        GeneratorKind::Balanced => gen_balanced(params),
        GeneratorKind::NoTriangle => gen_no_triangle(params),
    }
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent seed from a base seed and a path of integers.
///
/// `h = mix(base + γ)`, then for each part `h = mix(h ^ mix(part + γ))`,
/// where `mix` is the SplitMix64 finalizer and `γ = 0x9e3779b97f4a7c15`.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(mix64(base.wrapping_add(GOLDEN_GAMMA)), |h, &part| {
            mix64(h ^ mix64(part.wrapping_add(GOLDEN_GAMMA)))
        })
}
