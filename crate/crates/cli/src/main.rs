mod args;

use std::fmt;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::Parser;
use serde::Serialize;
use trisat_core::bench::{
    self, format_aggregate_csv, locate_guaranteed_peak, locate_peak, AggregateRow, CampaignConfig,
    ExternalSolver, RunRecord, SolverChoice,
};
use trisat_core::constraint_graph::build_graph;
use trisat_core::generators::generate;
use trisat_core::ref_solver::solve;
use trisat_core::sat_core::{parse_dimacs, write_dimacs, write_dimacs_with_comment};
use trisat_core::{GenParams, GeneratorKind, GraphStats, Instance, SolveLimits, SolveStatus};

use args::{
    AggregateArgs, BenchArgs, Cli, Command, GenerateArgs, LimitArgs, SolveArgs, SolverArg,
    StatsArgs,
};

const EXIT_USAGE: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

/// Invalid flag values detected after parsing.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(message: impl fmt::Display) -> anyhow::Error {
    UsageError(message.to_string()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.is::<UsageError>() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_RUNTIME)
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Generate(a) => cmd_generate(a).map(|_| ExitCode::SUCCESS),
        Command::Stats(a) => cmd_stats(a).map(|_| ExitCode::SUCCESS),
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a).map(|_| ExitCode::SUCCESS),
        Command::Aggregate(a) => cmd_aggregate(a).map(|_| ExitCode::SUCCESS),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_cnf(path: &Path) -> Result<Instance> {
    let text = read_input(path)?;
    parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn limits(args: &LimitArgs) -> Result<SolveLimits> {
    let max_wall_time = match args.timeout {
        None => None,
        Some(secs) => Some(
            Duration::try_from_secs_f64(secs)
                .map_err(|_| usage(format!("invalid --timeout {secs}")))?,
        ),
    };
    Ok(SolveLimits {
        max_decisions: args.max_decisions,
        max_wall_time,
    })
}

fn cmd_generate(a: GenerateArgs) -> Result<()> {
    let seed = a.seed.resolve();
    let params = GenParams::new(a.kind, a.k, a.n, a.m, seed);
    params.validate().map_err(usage)?;
    let instance = generate(&params)?;
    let text = if a.comment {
        let note = format!(
            "trisat generate --kind {} -k {} -n {} -m {} --seed {}",
            a.kind, a.k, a.n, a.m, seed
        );
        write_dimacs_with_comment(&instance, &note)
    } else {
        write_dimacs(&instance)
    };
    let stats = GraphStats::compute(&build_graph(&instance));
    let summary = format!(
        "seed: {seed}\nkind: {}\nk: {}\nn: {}\nm: {}\n{}",
        a.kind,
        a.k,
        a.n,
        a.m,
        stats_lines(&stats)
    );
    match &a.output {
        Some(path) => {
            write_file(path, &text)?;
            print!("{summary}");
        }
        None => {
            print!("{text}");
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn stats_lines(s: &GraphStats) -> String {
    format!(
        "edges: {}\nrepeated pairs: {}\ntriangles: {}\nincomplete triangles: {}\n\
         cluster coefficient: {:.6}\naverage local clustering: {:.6}\naverage distance: {:.6}\n",
        s.edges,
        s.repeated_pairs,
        s.triangles,
        s.incomplete_triangles,
        s.cluster_coefficient,
        s.average_local_clustering,
        s.average_distance
    )
}

#[derive(Serialize)]
struct StatsReport {
    n: u32,
    m: usize,
    arity: usize,
    #[serde(flatten)]
    graph: GraphStats,
}

fn cmd_stats(a: StatsArgs) -> Result<()> {
    let instance = read_cnf(&a.cnf)?;
    let graph = GraphStats::compute(&build_graph(&instance));
    if a.json {
        let report = StatsReport {
            n: instance.n(),
            m: instance.m(),
            arity: instance.arity(),
            graph,
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!(
            "n: {}\nm: {}\narity: {}\n{}",
            instance.n(),
            instance.m(),
            instance.arity(),
            stats_lines(&graph)
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct SolveReport {
    status: SolveStatus,
    decisions: u64,
    propagations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<Vec<i64>>,
}

fn cmd_solve(a: SolveArgs) -> Result<ExitCode> {
    let instance = read_cnf(&a.cnf)?;
    let result = solve(&instance, limits(&a.limits)?);
    let model: Option<Vec<i64>> = result.model.as_ref().filter(|_| !a.no_model).map(|values| {
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| if v { i as i64 + 1 } else { -(i as i64 + 1) })
            .collect()
    });
    let mut out = io::stdout().lock();
    if a.json {
        let report = SolveReport {
            status: result.status,
            decisions: result.decisions,
            propagations: result.propagations,
            model,
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        let line = match result.status {
            SolveStatus::Sat => "SATISFIABLE",
            SolveStatus::Unsat => "UNSATISFIABLE",
            SolveStatus::LimitExceeded => "UNKNOWN",
        };
        writeln!(out, "s {line}")?;
        writeln!(out, "c decisions: {}", result.decisions)?;
        writeln!(out, "c propagations: {}", result.propagations)?;
        if let Some(model) = model {
            for chunk in model.chunks(10) {
                let lits: Vec<String> = chunk.iter().map(i64::to_string).collect();
                writeln!(out, "v {}", lits.join(" "))?;
            }
            writeln!(out, "v 0")?;
        }
    }
    out.flush()?;
    Ok(match result.status {
        SolveStatus::Sat => ExitCode::from(10),
        SolveStatus::Unsat => ExitCode::from(20),
        SolveStatus::LimitExceeded => ExitCode::SUCCESS,
    })
}

/// `dir/sweep.csv` + `balanced` -> `dir/sweep-balanced.csv`.
fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{suffix}"),
    };
    path.with_file_name(name)
}

fn m_values(a: &BenchArgs) -> Result<Vec<usize>> {
    if !a.m.is_empty() {
        return Ok(a.m.clone());
    }
    let from = a
        .m_from
        .ok_or_else(|| usage("either --m or --m-from is required"))?;
    let to = a.m_to.unwrap_or(from);
    if a.step == 0 {
        return Err(usage("--step must be ≥ 1"));
    }
    if to < from {
        return Err(usage(format!("--m-to {to} is below --m-from {from}")));
    }
    Ok(bench::m_range(from, to, a.step))
}

/// Splits records by generator, keeping first-appearance order.
fn by_kind(records: &[RunRecord]) -> Vec<(GeneratorKind, Vec<RunRecord>)> {
    let mut groups: Vec<(GeneratorKind, Vec<RunRecord>)> = Vec::new();
    for r in records {
        match groups.iter_mut().find(|(kind, _)| *kind == r.kind) {
            Some((_, group)) => group.push(r.clone()),
            None => groups.push((r.kind, vec![r.clone()])),
        }
    }
    groups
}

/// Writes one aggregate file per generator (or `out` itself for a single
/// one) and, for several, a means file. Returns the summary text.
fn write_aggregates(records: &[RunRecord], out: &Path) -> Result<String> {
    let groups = by_kind(records);
    let mut series: Vec<(GeneratorKind, Vec<AggregateRow>)> = Vec::new();
    let mut summary = String::new();
    for (kind, group) in &groups {
        let rows = bench::aggregate(group)?;
        let path = if groups.len() == 1 {
            out.to_path_buf()
        } else {
            suffixed(out, kind.name())
        };
        write_file(&path, &format_aggregate_csv(&rows))?;
        summary.push_str(&peak_summary(*kind, group, &rows));
        summary.push_str(&format!("wrote {}\n", path.display()));
        series.push((*kind, rows));
    }
    if groups.len() > 1 {
        let path = suffixed(out, "means");
        write_file(&path, &bench::format_means_csv(&series))?;
        summary.push_str(&format!("wrote {}\n", path.display()));
    }
    Ok(summary)
}

fn peak_summary(kind: GeneratorKind, records: &[RunRecord], rows: &[AggregateRow]) -> String {
    let limited: usize = rows.iter().map(|r| r.limit_exceeded).sum();
    let errors: usize = rows.iter().map(|r| r.errors).sum();
    let mut line = format!("{kind}: {} runs", records.len());
    if limited > 0 || errors > 0 {
        line.push_str(&format!(", {limited} over limit, {errors} failed"));
    }
    if let Ok(peak) = locate_peak(rows) {
        line.push_str(&format!(
            ", peak m={} mean decisions {:.2}",
            peak.m, peak.value
        ));
    }
    if let Ok((m, min)) = locate_guaranteed_peak(records) {
        line.push_str(&format!(
            ", easiest-instance peak m={m} min decisions {min}"
        ));
    }
    line.push('\n');
    line
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let solver = match a.solver {
        SolverArg::Internal => SolverChoice::Internal,
        SolverArg::External => {
            let template = a
                .solver_cmd
                .as_deref()
                .ok_or_else(|| usage("--solver external needs --solver-cmd"))?;
            SolverChoice::External(ExternalSolver::new(template, &a.decision_regex).map_err(usage)?)
        }
    };
    let seed = a.seed.resolve();
    let config = CampaignConfig {
        k: a.k,
        n: a.n,
        m_values: m_values(&a)?,
        runs_per_point: a.runs,
        kinds: a.kind.kinds(),
        solver,
        base_seed: seed,
        limits: limits(&a.limits)?,
        workers: a.workers,
    };
    config.validate().map_err(usage)?;
    let records = bench::run_campaign(&config)?;
    if let Some(path) = &a.records {
        bench::write_records_csv(&records, path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let summary = write_aggregates(&records, &a.out)?;
    print!("seed: {seed}\n{summary}");
    if let Some(path) = &a.records {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_aggregate(a: AggregateArgs) -> Result<()> {
    let text = read_input(&a.records)?;
    let records = bench::parse_records_csv(text.as_bytes())
        .with_context(|| format!("parsing {}", a.records.display()))?;
    match &a.out {
        Some(out) => print!("{}", write_aggregates(&records, out)?),
        None => {
            let groups = by_kind(&records);
            if groups.len() > 1 {
                return Err(usage("records hold several generators; pass --out"));
            }
            print!("{}", format_aggregate_csv(&bench::aggregate(&records)?));
        }
    }
    Ok(())
}
