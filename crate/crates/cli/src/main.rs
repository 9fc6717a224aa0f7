mod commands;
mod manifest;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Completely independent spanning trees and multi-protection routing on
/// RCube logic graphs.
#[derive(Debug, Parser)]
#[command(name = "cist-rcube", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate L-RCube(n,m,k) as JSON or an edge list.
    Gen(GenArgs),
    /// Construct CISTs and write them as JSON.
    Cist(CistArgs),
    /// Check a set of trees against a graph.
    Verify(VerifyArgs),
    /// Configure protection routings toward one destination.
    Route(RouteArgs),
    /// Estimate transmission failure rates under random node faults.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
struct Shape {
    /// Core servers per element.
    #[arg(long)]
    n: usize,
    /// Edge servers per element.
    #[arg(long)]
    m: usize,
    /// Order of the recursion.
    #[arg(long)]
    k: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum GraphFormat {
    Json,
    #[value(alias = "edges")]
    #[serde(rename = "edgelist")]
    Edgelist,
}

#[derive(Debug, Args, Serialize)]
struct GenArgs {
    #[command(flatten)]
    #[serde(flatten)]
    shape: Shape,
    #[arg(long, value_enum, default_value = "json")]
    format: GraphFormat,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct CistArgs {
    #[command(flatten)]
    #[serde(flatten)]
    shape: Shape,
    /// Check the result before writing it.
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value = "trees.json")]
    out: std::path::PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    /// Graph JSON as written by `gen`.
    #[arg(long)]
    graph: std::path::PathBuf,
    /// Trees JSON as written by `cist`.
    #[arg(long)]
    trees: std::path::PathBuf,
    /// Also compare tree paths pair by pair (small graphs only).
    #[arg(long)]
    definitional: bool,
    /// Largest vertex count the path comparison accepts.
    #[arg(long, default_value_t = 64, requires = "definitional")]
    cap: usize,
    /// Run the path comparison above its size cap.
    #[arg(long, requires = "definitional")]
    force: bool,
}

#[derive(Debug, Args, Serialize)]
struct RouteArgs {
    /// Trees JSON as written by `cist`.
    #[arg(long)]
    trees: std::path::PathBuf,
    /// Destination address, e.g. 13, 1.3 or 1,3.
    #[arg(long)]
    dest: String,
    /// Zero-based indices of the two trees to use.
    #[arg(long, value_parser = parse_pair, conflicts_with = "all_pairs")]
    pair: Option<(usize, usize)>,
    /// One routing per tree pair.
    #[arg(long)]
    all_pairs: bool,
    /// Graph JSON; without it vertices are taken from the trees.
    #[arg(long)]
    graph: Option<std::path::PathBuf>,
    /// Check protectedness of each routing (needs --graph).
    #[arg(long, requires = "graph")]
    verify: bool,
    #[arg(long, default_value = "routing.json")]
    out: std::path::PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModelArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Forwarding,
    Path,
    Detour,
}

#[derive(Debug, Args, Serialize)]
#[command(group = clap::ArgGroup::new("points").required(true).args(["faults", "sweep"]))]
struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    shape: Shape,
    #[arg(long, value_enum, default_value = "all")]
    model: ModelArg,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Number of faulty vertices.
    #[arg(long)]
    faults: Option<usize>,
    /// Sweep |F| = 2, 3, ... until every model exceeds the threshold.
    #[arg(long)]
    sweep: bool,
    /// Last |F| of a sweep.
    #[arg(long, requires = "sweep")]
    max_faults: Option<usize>,
    #[arg(long, default_value_t = 0.005)]
    threshold: f64,
    /// Master seed; drawn from system entropy if absent.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "forwarding")]
    mode: ModeArg,
    /// One fault set per batch instead of one per trial.
    #[arg(long)]
    fixed_faults: bool,
    /// Output CSV; standard output if absent.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two indices like 0,1, got {s:?}"))?;
    let idx = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad tree index {x:?}: {e}"))
    };
    Ok((idx(a)?, idx(b)?))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
