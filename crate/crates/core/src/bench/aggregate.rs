use std::collections::BTreeMap;

use super::{BenchError, RunRecord, RunStatus};

/// Minimum, sum and maximum of a metric over the records of one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple<T> {
    pub min: T,
    pub total: T,
    pub max: T,
}

impl<T: Copy + PartialOrd + std::ops::Add<Output = T>> Triple<T> {
    fn of(value: T) -> Self {
        Triple {
            min: value,
            total: value,
            max: value,
        }
    }

    fn push(slot: &mut Option<Self>, value: T) {
        match slot {
            None => *slot = Some(Triple::of(value)),
            Some(t) => {
                if value < t.min {
                    t.min = value;
                }
                if value > t.max {
                    t.max = value;
                }
                t.total = t.total + value;
            }
        }
    }
}

/// Per-clause-count summary. Totals are plain sums, not scaled.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub m: usize,
    pub runs: usize,
    pub sat: usize,
    pub limit_exceeded: usize,
    pub errors: usize,
    /// Records contributing to `decisions`.
    pub decision_runs: usize,
    pub decisions: Option<Triple<u64>>,
    /// Records contributing to the graph metrics.
    pub metric_runs: usize,
    pub repeated_pairs: Option<Triple<u64>>,
    pub avg_distance: Option<Triple<f64>>,
    pub cluster_coeff: Option<Triple<f64>>,
}

impl AggregateRow {
    fn empty(m: usize) -> AggregateRow {
        AggregateRow {
            m,
            runs: 0,
            sat: 0,
            limit_exceeded: 0,
            errors: 0,
            decision_runs: 0,
            decisions: None,
            metric_runs: 0,
            repeated_pairs: None,
            avg_distance: None,
            cluster_coeff: None,
        }
    }

    pub fn mean_decisions(&self) -> Option<f64> {
        self.decisions
            .map(|d| d.total as f64 / self.decision_runs as f64)
    }

    pub fn mean_repeated_pairs(&self) -> Option<f64> {
        self.repeated_pairs
            .map(|t| t.total as f64 / self.metric_runs as f64)
    }

    pub fn mean_avg_distance(&self) -> Option<f64> {
        self.avg_distance.map(|t| t.total / self.metric_runs as f64)
    }

    pub fn mean_cluster_coeff(&self) -> Option<f64> {
        self.cluster_coeff
            .map(|t| t.total / self.metric_runs as f64)
    }
}

/// Groups records by `m` (ascending). Records must share kind, k and n.
/// Limit-exceeded and failed runs are counted but excluded from decision
/// statistics.
pub fn aggregate(records: &[RunRecord]) -> Result<Vec<AggregateRow>, BenchError> {
    if let Some(first) = records.first() {
        let tag = |r: &RunRecord| format!("{} k={} n={}", r.kind, r.k, r.n);
        if let Some(other) = records
            .iter()
            .find(|r| (r.kind, r.k, r.n) != (first.kind, first.k, first.n))
        {
            return Err(BenchError::MixedRecords(tag(first), tag(other)));
        }
    }

    let mut rows: BTreeMap<usize, AggregateRow> = BTreeMap::new();
    for record in records {
        let row = rows
            .entry(record.m)
            .or_insert_with(|| AggregateRow::empty(record.m));
        row.runs += 1;
        match record.status {
            RunStatus::Sat => row.sat += 1,
            RunStatus::LimitExceeded => row.limit_exceeded += 1,
            RunStatus::Error => row.errors += 1,
            RunStatus::Unsat => {}
        }
        if record.counts_decisions() {
            row.decision_runs += 1;
            Triple::push(&mut row.decisions, record.decisions.unwrap_or(0));
        }
        if let Some(metrics) = &record.metrics {
            row.metric_runs += 1;
            Triple::push(&mut row.repeated_pairs, metrics.repeated_pairs as u64);
            Triple::push(&mut row.avg_distance, metrics.avg_distance);
            Triple::push(&mut row.cluster_coeff, metrics.cluster_coeff);
        }
    }
    Ok(rows.into_values().collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub m: usize,
    pub value: f64,
}

/// Clause count with the largest mean decision count; ties go to the
/// smallest `m`. Rows without decision data are skipped.
pub fn locate_peak(rows: &[AggregateRow]) -> Result<Peak, BenchError> {
    rows.iter()
        .filter_map(|row| row.mean_decisions().map(|value| Peak { m: row.m, value }))
        .fold(None, |best: Option<Peak>, p| match best {
            Some(b) if b.value > p.value || (b.value == p.value && b.m <= p.m) => Some(b),
            _ => Some(p),
        })
        .ok_or(BenchError::Empty)
}

/// Clause count whose easiest instance needs the most decisions: the
/// maximum over `m` of the per-point minimum. Ties go to the smallest `m`.
pub fn locate_guaranteed_peak(records: &[RunRecord]) -> Result<(usize, u64), BenchError> {
    let mut minima: BTreeMap<usize, u64> = BTreeMap::new();
    for record in records.iter().filter(|r| r.counts_decisions()) {
        let d = record.decisions.unwrap_or(0);
        minima
            .entry(record.m)
            .and_modify(|min| *min = (*min).min(d))
            .or_insert(d);
    }
    minima
        .into_iter()
        .fold(None, |best: Option<(usize, u64)>, (m, d)| match best {
            Some((_, bd)) if bd >= d => best,
            _ => Some((m, d)),
        })
        .ok_or(BenchError::Empty)
}
