//! Difficulty campaigns: sweep the clause count, generate a batch of
//! instances per point, measure their constraint graphs, solve them and
//! aggregate the results per clause count.
//!
//! Every record's seed is derived from `(base_seed, kind, m, run)` with
//! [`derive_seed`], so records do not depend on which other points or
//! generators are part of the campaign, nor on how many workers run it.

mod aggregate;
mod csv_io;
mod external;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraint_graph::{
    average_distance, build_graph, cluster_coefficient, repeated_pair_count,
};
use crate::generators::{derive_seed, generate, GenError, GenParams, GeneratorKind};
use crate::ref_solver::{solve, SolveLimits, SolveStatus};
use crate::sat_core::Instance;

pub use aggregate::{aggregate, locate_guaranteed_peak, locate_peak, AggregateRow, Peak, Triple};
pub use csv_io::{
    format_aggregate_csv, format_means_csv, format_records_csv, parse_records_csv,
    write_aggregate_csv, write_means_csv, write_records_csv, AGGREGATE_HEADER,
};
pub use external::{ExternalError, ExternalResult, ExternalSolver, CNF_PLACEHOLDER};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid campaign: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Generation(#[from] GenError),
    #[error("records mix {0} and {1}; aggregate one (kind, k, n) at a time")]
    MixedRecords(String, String),
    #[error("no rows with decision data")]
    Empty,
    #[error("solver command template must contain {CNF_PLACEHOLDER}: `{0}`")]
    BadTemplate(String),
    #[error("invalid decision regex: {0}")]
    BadRegex(#[from] regex::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    BadRecord { line: u64, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which solver measures difficulty.
#[derive(Debug, Clone)]
pub enum SolverChoice {
    Internal,
    External(ExternalSolver),
}

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub k: usize,
    pub n: u32,
    pub m_values: Vec<usize>,
    pub runs_per_point: usize,
    pub kinds: Vec<GeneratorKind>,
    pub solver: SolverChoice,
    pub base_seed: u64,
    pub limits: SolveLimits,
    /// Worker threads; 0 means one per available core.
    pub workers: usize,
}

/// Inclusive arithmetic sweep `from, from + step, ..., ≤ to`.
pub fn m_range(from: usize, to: usize, step: usize) -> Vec<usize> {
    if step == 0 || from > to {
        return Vec::new();
    }
    (from..=to).step_by(step).collect()
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.m_values.is_empty() {
            return Err(BenchError::InvalidConfig("no clause counts".into()));
        }
        if self.runs_per_point == 0 {
            return Err(BenchError::InvalidConfig(
                "runs per point must be ≥ 1".into(),
            ));
        }
        if self.kinds.is_empty() {
            return Err(BenchError::InvalidConfig("no generator selected".into()));
        }
        for &m in &self.m_values {
            GenParams::new(self.kinds[0], self.k, self.n, m, 0).validate()?;
        }
        Ok(())
    }

    /// Seed of run `run` at clause count `m` for `kind`.
    pub fn seed_for(&self, kind: GeneratorKind, m: usize, run: usize) -> u64 {
        derive_seed(self.base_seed, &[kind.seed_tag(), m as u64, run as u64])
    }

    /// Jobs in output order: kind, then m, then run index.
    pub fn jobs(&self) -> Vec<GenParams> {
        let mut jobs =
            Vec::with_capacity(self.kinds.len() * self.m_values.len() * self.runs_per_point);
        for &kind in &self.kinds {
            for &m in &self.m_values {
                for run in 0..self.runs_per_point {
                    jobs.push(GenParams::new(
                        kind,
                        self.k,
                        self.n,
                        m,
                        self.seed_for(kind, m, run),
                    ));
                }
            }
        }
        jobs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Sat,
    Unsat,
    LimitExceeded,
    /// Generation or the external solver failed.
    Error,
}

impl RunStatus {
    pub fn name(self) -> &'static str {
        match self {
            RunStatus::Sat => "sat",
            RunStatus::Unsat => "unsat",
            RunStatus::LimitExceeded => "limit_exceeded",
            RunStatus::Error => "error",
        }
    }

    pub fn parse(s: &str) -> Option<RunStatus> {
        match s {
            "sat" => Some(RunStatus::Sat),
            "unsat" => Some(RunStatus::Unsat),
            "limit_exceeded" => Some(RunStatus::LimitExceeded),
            "error" => Some(RunStatus::Error),
            _ => None,
        }
    }
}

impl From<SolveStatus> for RunStatus {
    fn from(status: SolveStatus) -> RunStatus {
        match status {
            SolveStatus::Sat => RunStatus::Sat,
            SolveStatus::Unsat => RunStatus::Unsat,
            SolveStatus::LimitExceeded => RunStatus::LimitExceeded,
        }
    }
}

/// Constraint-graph measurements of one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceMetrics {
    pub repeated_pairs: usize,
    pub avg_distance: f64,
    pub cluster_coeff: f64,
    pub duplicate_clauses: usize,
}

impl InstanceMetrics {
    pub fn measure(instance: &Instance) -> InstanceMetrics {
        let graph = build_graph(instance);
        let mut keys: Vec<_> = instance.clauses().iter().map(|c| c.key()).collect();
        keys.sort_unstable();
        keys.dedup();
        InstanceMetrics {
            repeated_pairs: repeated_pair_count(&graph),
            avg_distance: average_distance(&graph),
            cluster_coeff: cluster_coefficient(&graph),
            duplicate_clauses: instance.m() - keys.len(),
        }
    }
}

/// Outcome of one generated-and-solved instance.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub kind: GeneratorKind,
    pub k: usize,
    pub n: u32,
    pub m: usize,
    pub run: usize,
    pub seed: u64,
    pub status: RunStatus,
    /// Absent on errors, limits, or when an external solver's output did not
    /// match the decision pattern.
    pub decisions: Option<u64>,
    /// Absent when generation failed.
    pub metrics: Option<InstanceMetrics>,
    pub error: Option<String>,
}

impl RunRecord {
    /// Whether the record contributes to decision statistics.
    pub fn counts_decisions(&self) -> bool {
        matches!(self.status, RunStatus::Sat | RunStatus::Unsat) && self.decisions.is_some()
    }
}

/// Generates, measures and solves one instance.
pub fn run_one(
    params: &GenParams,
    run: usize,
    solver: &SolverChoice,
    limits: SolveLimits,
) -> RunRecord {
    let mut record = RunRecord {
        kind: params.kind,
        k: params.k,
        n: params.n,
        m: params.m,
        run,
        seed: params.seed,
        status: RunStatus::Error,
        decisions: None,
        metrics: None,
        error: None,
    };
    let instance = match generate(params) {
        Ok(instance) => instance,
        Err(err) => {
            record.error = Some(err.to_string());
            return record;
        }
    };
    record.metrics = Some(InstanceMetrics::measure(&instance));
    match solver {
        SolverChoice::Internal => {
            let result = solve(&instance, limits);
            record.status = result.status.into();
            if result.status != SolveStatus::LimitExceeded {
                record.decisions = Some(result.decisions);
            }
        }
        SolverChoice::External(external) => match external.run(&instance, limits) {
            Ok(result) => {
                record.status = result.status.into();
                record.decisions = result.decisions;
                record.error = result.note;
            }
            Err(err) => record.error = Some(err.to_string()),
        },
    }
    record
}

/// Runs every job of the campaign. Output order is kind, m, run index,
/// independent of the number of workers.
pub fn run_campaign(config: &CampaignConfig) -> Result<Vec<RunRecord>, BenchError> {
    config.validate()?;
    let jobs: Vec<(GenParams, usize)> = config
        .jobs()
        .into_iter()
        .enumerate()
        .map(|(i, p)| (p, i % config.runs_per_point))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| BenchError::InvalidConfig(format!("worker pool: {e}")))?;
    Ok(pool.install(|| {
        jobs.par_iter()
            .map(|(params, run)| run_one(params, *run, &config.solver, config.limits))
            .collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(workers: usize) -> CampaignConfig {
        CampaignConfig {
            k: 3,
            n: 20,
            m_values: vec![60, 80],
            runs_per_point: 3,
            kinds: GeneratorKind::ALL.to_vec(),
            solver: SolverChoice::Internal,
            base_seed: 7,
            limits: SolveLimits::unlimited(),
            workers,
        }
    }

    #[test]
    fn m_range_is_inclusive() {
        assert_eq!(m_range(600, 1000, 10).len(), 41);
        assert_eq!(m_range(3, 9, 3), vec![3, 6, 9]);
        assert_eq!(m_range(3, 10, 3), vec![3, 6, 9]);
        assert!(m_range(5, 4, 1).is_empty());
        assert!(m_range(1, 4, 0).is_empty());
    }

    #[test]
    fn records_follow_job_order() {
        let records = run_campaign(&config(2)).unwrap();
        assert_eq!(records.len(), 3 * 2 * 3);
        let order: Vec<_> = records.iter().map(|r| (r.kind, r.m, r.run)).collect();
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(order, sorted);
        assert!(records
            .iter()
            .all(|r| r.counts_decisions() && r.error.is_none()));
    }

    #[test]
    fn seeds_ignore_campaign_shape() {
        let a = config(1);
        let mut b = config(1);
        b.m_values = vec![80];
        b.kinds = vec![GeneratorKind::NoTriangle];
        assert_eq!(
            a.seed_for(GeneratorKind::NoTriangle, 80, 2),
            b.seed_for(GeneratorKind::NoTriangle, 80, 2)
        );
        let ra = run_campaign(&a).unwrap();
        let rb = run_campaign(&b).unwrap();
        let tail: Vec<_> = ra
            .iter()
            .filter(|r| r.kind == GeneratorKind::NoTriangle && r.m == 80)
            .cloned()
            .collect();
        assert_eq!(tail, rb);
    }

    #[test]
    fn invalid_configs() {
        let mut c = config(1);
        c.m_values.clear();
        assert!(matches!(c.validate(), Err(BenchError::InvalidConfig(_))));
        let mut c = config(1);
        c.runs_per_point = 0;
        assert!(c.validate().is_err());
        let mut c = config(1);
        c.n = 2;
        assert!(matches!(
            c.validate(),
            Err(BenchError::Generation(GenError::TooFewVariables { .. }))
        ));
    }

    #[test]
    fn generation_failure_becomes_error_record() {
        // Four distinct 2-clauses over two variables; ten requested.
        let params = GenParams::new(GeneratorKind::Random, 2, 2, 10, 1);
        let record = run_one(
            &params,
            0,
            &SolverChoice::Internal,
            SolveLimits::unlimited(),
        );
        assert_eq!(record.status, RunStatus::Error);
        assert!(record.metrics.is_none());
        assert!(record.error.unwrap().contains("distinct"));
    }

    #[test]
    fn limit_exceeded_has_no_decisions() {
        let params = GenParams::new(GeneratorKind::Balanced, 3, 60, 250, 3);
        let record = run_one(
            &params,
            0,
            &SolverChoice::Internal,
            SolveLimits::decisions(1),
        );
        assert_eq!(record.status, RunStatus::LimitExceeded);
        assert_eq!(record.decisions, None);
        assert!(!record.counts_decisions());
        assert!(record.metrics.is_some());
    }
}
