use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use super::{AggregateRow, BenchError, InstanceMetrics, RunRecord, RunStatus, Triple};
use crate::generators::GeneratorKind;

pub const AGGREGATE_HEADER: [&str; 15] = [
    "m",
    "runs",
    "sat",
    "dec_min",
    "dec_total",
    "dec_max",
    "rp_min",
    "rp_total",
    "rp_max",
    "dist_min",
    "dist_total",
    "dist_max",
    "cc_min",
    "cc_total",
    "cc_max",
];

const RECORD_HEADER: [&str; 13] = [
    "kind",
    "k",
    "n",
    "m",
    "run",
    "seed",
    "status",
    "decisions",
    "repeated_pairs",
    "avg_distance",
    "cluster_coeff",
    "duplicate_clauses",
    "error",
];

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("CSV fields are UTF-8")
}

fn int_cells(t: Option<Triple<u64>>) -> [String; 3] {
    match t {
        Some(t) => [t.min.to_string(), t.total.to_string(), t.max.to_string()],
        None => Default::default(),
    }
}

fn real_cells(t: Option<Triple<f64>>) -> [String; 3] {
    match t {
        Some(t) => [
            format!("{:.6}", t.min),
            format!("{:.6}", t.total),
            format!("{:.6}", t.max),
        ],
        None => Default::default(),
    }
}

/// One line per row under [`AGGREGATE_HEADER`]; reals with six decimals,
/// missing statistics as empty cells.
pub fn format_aggregate_csv(rows: &[AggregateRow]) -> String {
    let mut w = writer();
    w.write_record(AGGREGATE_HEADER).expect("in-memory write");
    for row in rows {
        let mut cells = vec![row.m.to_string(), row.runs.to_string(), row.sat.to_string()];
        cells.extend(int_cells(row.decisions));
        cells.extend(int_cells(row.repeated_pairs));
        cells.extend(real_cells(row.avg_distance));
        cells.extend(real_cells(row.cluster_coeff));
        w.write_record(&cells).expect("in-memory write");
    }
    finish(w)
}

/// Per-run records. Reals use the shortest representation that parses back
/// to the same value, so re-aggregating a written file is exact.
pub fn format_records_csv(records: &[RunRecord]) -> String {
    let mut w = writer();
    w.write_record(RECORD_HEADER).expect("in-memory write");
    for r in records {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let metrics = r.metrics.as_ref();
        w.write_record([
            r.kind.name().to_string(),
            r.k.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.run.to_string(),
            r.seed.to_string(),
            r.status.name().to_string(),
            opt(r.decisions.map(|d| d.to_string())),
            opt(metrics.map(|x| x.repeated_pairs.to_string())),
            opt(metrics.map(|x| x.avg_distance.to_string())),
            opt(metrics.map(|x| x.cluster_coeff.to_string())),
            opt(metrics.map(|x| x.duplicate_clauses.to_string())),
            opt(r.error.clone()),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

/// Mean decisions per clause count, one column per generator.
pub fn format_means_csv(series: &[(GeneratorKind, Vec<AggregateRow>)]) -> String {
    let ms: BTreeSet<usize> = series
        .iter()
        .flat_map(|(_, rows)| rows.iter().map(|r| r.m))
        .collect();
    let mut w = writer();
    let mut header = vec!["m".to_string()];
    header.extend(series.iter().map(|(kind, _)| kind.name().to_string()));
    w.write_record(&header).expect("in-memory write");
    for m in ms {
        let mut cells = vec![m.to_string()];
        for (_, rows) in series {
            let mean = rows
                .iter()
                .find(|r| r.m == m)
                .and_then(AggregateRow::mean_decisions);
            cells.push(mean.map(|v| format!("{v:.6}")).unwrap_or_default());
        }
        w.write_record(&cells).expect("in-memory write");
    }
    finish(w)
}

pub fn write_aggregate_csv(rows: &[AggregateRow], path: &Path) -> Result<(), BenchError> {
    Ok(std::fs::write(path, format_aggregate_csv(rows))?)
}

pub fn write_records_csv(records: &[RunRecord], path: &Path) -> Result<(), BenchError> {
    Ok(std::fs::write(path, format_records_csv(records))?)
}

pub fn write_means_csv(
    series: &[(GeneratorKind, Vec<AggregateRow>)],
    path: &Path,
) -> Result<(), BenchError> {
    Ok(std::fs::write(path, format_means_csv(series))?)
}

/// Reads a file produced by [`format_records_csv`].
pub fn parse_records_csv<R: Read>(input: R) -> Result<Vec<RunRecord>, BenchError> {
    let mut reader = csv::ReaderBuilder::new().from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().ne(RECORD_HEADER) {
        return Err(BenchError::BadRecord {
            line: 1,
            message: format!("expected header `{}`", RECORD_HEADER.join(",")),
        });
    }
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |message: String| BenchError::BadRecord { line, message };
        let field = |i: usize| row.get(i).unwrap_or("");
        fn num<T: std::str::FromStr>(s: &str, name: &str) -> Result<T, String> {
            s.parse().map_err(|_| format!("bad {name} `{s}`"))
        }
        fn opt<T: std::str::FromStr>(s: &str, name: &str) -> Result<Option<T>, String> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s, name).map(Some)
            }
        }

        let parsed = (|| -> Result<RunRecord, String> {
            let kind: GeneratorKind = field(0).parse().map_err(|e| format!("{e}"))?;
            let status =
                RunStatus::parse(field(6)).ok_or_else(|| format!("bad status `{}`", field(6)))?;
            let repeated_pairs: Option<usize> = opt(field(8), "repeated_pairs")?;
            let metrics = match repeated_pairs {
                None => None,
                Some(repeated_pairs) => Some(InstanceMetrics {
                    repeated_pairs,
                    avg_distance: num(field(9), "avg_distance")?,
                    cluster_coeff: num(field(10), "cluster_coeff")?,
                    duplicate_clauses: num(field(11), "duplicate_clauses")?,
                }),
            };
            Ok(RunRecord {
                kind,
                k: num(field(1), "k")?,
                n: num(field(2), "n")?,
                m: num(field(3), "m")?,
                run: num(field(4), "run")?,
                seed: num(field(5), "seed")?,
                status,
                decisions: opt(field(7), "decisions")?,
                metrics,
                error: Some(field(12).to_string()).filter(|s| !s.is_empty()),
            })
        })();
        records.push(parsed.map_err(bad)?);
    }
    Ok(records)
}
