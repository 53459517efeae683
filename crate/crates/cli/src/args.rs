use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trisat_core::GeneratorKind;

#[derive(Debug, Parser)]
#[command(
    name = "trisat",
    version,
    about = "Hard k-SAT instance generation and difficulty campaigns"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance and write it as DIMACS CNF.
    Generate(GenerateArgs),
    /// Print constraint-graph statistics of a DIMACS file.
    Stats(StatsArgs),
    /// Solve a DIMACS file with the built-in DPLL solver.
    Solve(SolveArgs),
    /// Sweep clause counts, solve every instance and aggregate per point.
    Bench(BenchArgs),
    /// Aggregate a records file written by `bench --records`.
    Aggregate(AggregateArgs),
}

/// `--seed`: an unsigned integer, or `random` for a fresh one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Random,
}

impl std::str::FromStr for SeedArg {
    type Err = String;

    fn from_str(s: &str) -> Result<SeedArg, String> {
        if s.eq_ignore_ascii_case("random") {
            return Ok(SeedArg::Random);
        }
        s.parse()
            .map(SeedArg::Fixed)
            .map_err(|_| format!("expected an unsigned integer or `random`, got `{s}`"))
    }
}

impl SeedArg {
    pub fn resolve(self) -> u64 {
        match self {
            SeedArg::Fixed(seed) => seed,
            SeedArg::Random => rand::random(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Random,
    Balanced,
    NoTriangle,
    All,
}

impl KindArg {
    pub fn kinds(self) -> Vec<GeneratorKind> {
        match self {
            KindArg::Random => vec![GeneratorKind::Random],
            KindArg::Balanced => vec![GeneratorKind::Balanced],
            KindArg::NoTriangle => vec![GeneratorKind::NoTriangle],
            KindArg::All => GeneratorKind::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Internal,
    External,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_parser = parse_single_kind)]
    pub kind: GeneratorKind,
    /// Literals per clause.
    #[arg(short)]
    pub k: usize,
    /// Number of variables.
    #[arg(short)]
    pub n: u32,
    /// Number of clauses.
    #[arg(short)]
    pub m: usize,
    #[arg(long)]
    pub seed: SeedArg,
    /// Output file; the CNF goes to stdout and the summary to stderr if omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Prefix the CNF with a comment line recording the parameters.
    #[arg(long)]
    pub comment: bool,
}

fn parse_single_kind(s: &str) -> Result<GeneratorKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// DIMACS file, or `-` for stdin.
    pub cnf: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Give up after this many decisions.
    #[arg(long)]
    pub max_decisions: Option<u64>,
    /// Give up after this many seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// DIMACS file, or `-` for stdin.
    pub cnf: PathBuf,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[arg(long)]
    pub json: bool,
    /// Omit the model lines.
    #[arg(long)]
    pub no_model: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(short)]
    pub k: usize,
    #[arg(short)]
    pub n: u32,
    /// First clause count of the sweep.
    #[arg(long, required_unless_present = "m")]
    pub m_from: Option<usize>,
    /// Last clause count of the sweep (inclusive).
    #[arg(long, requires = "m_from")]
    pub m_to: Option<usize>,
    #[arg(long, default_value_t = 1, requires = "m_from")]
    pub step: usize,
    /// Explicit clause counts instead of a range.
    #[arg(short, long, value_delimiter = ',', conflicts_with = "m_from")]
    pub m: Vec<usize>,
    /// Instances per clause count.
    #[arg(long)]
    pub runs: usize,
    #[arg(long, value_enum, default_value_t = SolverArg::Internal)]
    pub solver: SolverArg,
    /// External solver command; `{cnf}` is replaced by the instance path.
    #[arg(long, required_if_eq("solver", "external"))]
    pub solver_cmd: Option<String>,
    /// Pattern whose first capture group is the decision count.
    #[arg(long, default_value = r"decisions\s*:\s*(\d+)")]
    pub decision_regex: String,
    #[arg(long)]
    pub seed: SeedArg,
    /// Aggregate CSV. With several generators, one file per generator is
    /// written next to it plus a `-means` file for plotting.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write every run to this CSV.
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Debug, Args)]
pub struct AggregateArgs {
    /// Records CSV.
    pub records: PathBuf,
    /// Aggregate CSV; printed to stdout if omitted and only one generator is
    /// present.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
