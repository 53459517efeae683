//! Hard k-SAT instance generation and difficulty measurement.
//!
//! Three generators are provided: uniform Random SAT, Balanced SAT (balanced
//! literal occurrences, few repeated variable pairs) and No-Triangle SAT
//! (Balanced SAT plus a tie-break that avoids closing triangles in the
//! constraint graph). Instances can be analysed through their constraint
//! graph, solved with a deterministic decision-counting DPLL solver or an
//! external DIMACS solver, and swept over clause counts in campaigns whose
//! aggregated results are written as CSV.

pub mod bench;
pub mod constraint_graph;
pub mod generators;
pub mod ref_solver;
pub mod sat_core;

pub use constraint_graph::{ConstraintGraph, GraphStats, TriangleLedger};
pub use generators::{GenError, GenParams, GeneratorKind};
pub use ref_solver::{SolveLimits, SolveResult, SolveStatus};
pub use sat_core::{Clause, ClauseKey, Instance, Literal, Polarity};
