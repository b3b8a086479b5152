//! Command-line front door: load a network, run the optimizer, and write
//! machine-readable results.
//!
//! Three subcommands: `detect` runs one or more seeded optimizer runs and
//! writes a JSON result document plus a TSV report, `evaluate` scores an
//! explicit partition, and `ovset` prints the overlap candidate set. All
//! randomness is attributable to `--seed`; repeated invocations produce
//! byte-identical result files apart from the `timing` subtree.
//!
//! Exit codes: 0 success, 2 usage error, 3 input error, 4 runtime error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::engine::{self, EngineError, Mode, RunConfig, RunResult};
use crate::graph::{self, AttributedNetwork};
use crate::objectives;
use crate::olar::OverlappingPartition;
use crate::overlap;

#[derive(Debug, Error)]
pub enum CliError {
    /// Flag combinations or values that make no sense; exit 2.
    #[error("{0}")]
    Usage(String),
    /// Unreadable or malformed network/partition inputs; exit 3.
    #[error("{0}")]
    Input(String),
    /// Failures after inputs were accepted (engine, scoring, writes); exit 4.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "mobbo",
    version,
    about = "Overlapping community detection on attributed networks"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the optimizer and write result files.
    Detect(DetectArgs),
    /// Score an explicit (possibly overlapping) partition.
    Evaluate(EvaluateArgs),
    /// Print the overlap candidate node set, one external id per line.
    Ovset(OvsetArgs),
}

#[derive(Debug, Args)]
struct NetArgs {
    /// Edge list: one "u v" pair per line; '#' starts a comment.
    #[arg(long)]
    edges: PathBuf,
    /// Node attributes: CSV whose first column is the node id.
    #[arg(long)]
    attributes: PathBuf,
    /// Silently skip attribute rows for nodes absent from the edge list.
    #[arg(long)]
    drop_isolated: bool,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[command(flatten)]
    net: NetArgs,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Master seed; run r uses seed + r.
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    habitats: usize,
    #[arg(long, default_value_t = 100)]
    generations: usize,
    /// Compromise exponents to report, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5")]
    alphas: Vec<f64>,
    /// Number of independent runs.
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// Link-closeness bound for overlap candidates.
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    /// Evolve habitats of one generation concurrently (same results).
    #[arg(long)]
    parallel: bool,
    /// Result document path; a .tsv report lands next to it.
    #[arg(long)]
    out: PathBuf,
    /// Also write per-generation best objective values as <out>.trace.tsv.
    #[arg(long)]
    trace: bool,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[command(flatten)]
    net: NetArgs,
    /// Partition file: one community per line, whitespace-separated external
    /// ids; overlap is a node repeated across lines.
    #[arg(long)]
    partition: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5")]
    alphas: Vec<f64>,
}

#[derive(Debug, Args)]
struct OvsetArgs {
    #[command(flatten)]
    net: NetArgs,
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    #[arg(long)]
    seed: u64,
}

/// Parses `args` and runs the selected subcommand, returning the process
/// exit code instead of exiting so tests can drive it in-process.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let is_error = e.use_stderr();
            let _ = e.print();
            return if is_error { 2 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Detect(args) => cmd_detect(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Ovset(args) => cmd_ovset(args),
    };
    match outcome {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn load(net: &NetArgs) -> Result<AttributedNetwork, CliError> {
    let read = |p: &PathBuf| {
        fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
    };
    let edges = read(&net.edges)?;
    let attrs = read(&net.attributes)?;
    graph::load_network(&edges, &attrs, net.drop_isolated)
        .map_err(|e| CliError::Input(e.to_string()))
}

fn check_alphas(alphas: &[f64]) -> Result<(), CliError> {
    match alphas.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
        Some(a) => Err(CliError::Usage(format!("--alphas must be finite and ≥ 0, got {a}"))),
        None => Ok(()),
    }
}

/// Shortest `f64` rendering; used for α map keys and report cells.
fn fnum(v: f64) -> String {
    format!("{v}")
}

// ---------------------------------------------------------------------------
// detect

#[derive(Serialize)]
struct ResultDoc {
    meta: MetaDoc,
    runs: Vec<RunDoc>,
    aggregate: AggregateDoc,
    /// Wall-clock measurements; the only non-deterministic subtree.
    timing: TimingDoc,
}

#[derive(Serialize)]
struct MetaDoc {
    edges: String,
    attributes: String,
    mode: Mode,
    seed: u64,
    runs: usize,
    habitats: usize,
    generations: usize,
    threshold: f64,
    alphas: Vec<f64>,
    nodes: usize,
    edge_count: usize,
}

#[derive(Serialize)]
struct RunDoc {
    run: usize,
    seed: u64,
    /// Overlap candidates, external ids.
    ovset: Vec<String>,
    /// Per-α index into `solutions` of the best compromise.
    best: BTreeMap<String, usize>,
    /// The rank-1 habitats in population order.
    solutions: Vec<SolutionDoc>,
}

#[derive(Serialize)]
struct SolutionDoc {
    communities: Vec<Vec<String>>,
    eq: f64,
    simatt: f64,
    alpha_saem: BTreeMap<String, f64>,
}

#[derive(Serialize)]
struct AggregateDoc {
    /// Mean over runs of the best-of-run compromise score, per α.
    mean_best_alpha_saem: BTreeMap<String, f64>,
    mean_best_eq: f64,
    mean_best_simatt: f64,
}

#[derive(Serialize)]
struct TimingDoc {
    total_seconds: f64,
    per_run_seconds: Vec<f64>,
}

fn solution_doc(
    net: &AttributedNetwork,
    result: &RunResult,
    idx: usize,
    alphas: &[f64],
) -> Result<SolutionDoc, CliError> {
    let habitat = &result.population[idx];
    let part = habitat.partition();
    let communities = part
        .communities()
        .iter()
        .map(|c| c.iter().map(|&v| net.external_id(v).to_string()).collect())
        .collect();
    let hsi = habitat.hsi.expect("front is evaluated");
    let mut alpha_saem = BTreeMap::new();
    for &alpha in alphas {
        let score = objectives::alpha_saem(hsi.simatt, hsi.eq, alpha).map_err(runtime)?;
        alpha_saem.insert(fnum(alpha), score);
    }
    Ok(SolutionDoc { communities, eq: hsi.eq, simatt: hsi.simatt, alpha_saem })
}

fn run_doc(
    net: &AttributedNetwork,
    result: &RunResult,
    run: usize,
    alphas: &[f64],
) -> Result<RunDoc, CliError> {
    let front = result.front();
    let mut solutions = Vec::with_capacity(front.len());
    for &idx in &front {
        solutions.push(solution_doc(net, result, idx, alphas)?);
    }
    let mut best = BTreeMap::new();
    for &alpha in alphas {
        let idx = result.best_compromise(alpha).map_err(runtime)?;
        let pos = front.iter().position(|&i| i == idx).expect("compromise is rank 1");
        best.insert(fnum(alpha), pos);
    }
    let ovset =
        result.ovset.members().iter().map(|&v| net.external_id(v).to_string()).collect();
    Ok(RunDoc { run, seed: result.config.seed, ovset, best, solutions })
}

/// (run, seed, best α_SAEM per α, best EQ, best SimAtt, wall seconds)
type ReportRow = (usize, u64, Vec<f64>, f64, f64, f64);

/// Per-run report rows plus their aggregate, mirroring the TSV layout.
struct RunReport {
    mode: Mode,
    alphas: Vec<f64>,
    rows: Vec<ReportRow>,
}

impl RunReport {
    fn build(results: &[RunResult], alphas: &[f64]) -> Result<RunReport, CliError> {
        let mut rows = Vec::with_capacity(results.len());
        for (r, result) in results.iter().enumerate() {
            let mut scores = Vec::with_capacity(alphas.len());
            for &alpha in alphas {
                let idx = result.best_compromise(alpha).map_err(runtime)?;
                let hsi = result.population[idx].hsi.expect("front is evaluated");
                scores.push(
                    objectives::alpha_saem(hsi.simatt, hsi.eq, alpha).map_err(runtime)?,
                );
            }
            let last = result.trace.last().expect("trace is never empty");
            rows.push((
                r,
                result.config.seed,
                scores,
                last.best_eq,
                last.best_simatt,
                result.wall.as_secs_f64(),
            ));
        }
        Ok(RunReport {
            mode: results.first().expect("at least one run").config.mode,
            alphas: alphas.to_vec(),
            rows,
        })
    }

    fn mean_alpha_scores(&self) -> Vec<f64> {
        let n = self.rows.len() as f64;
        (0..self.alphas.len())
            .map(|j| self.rows.iter().map(|row| row.2[j]).sum::<f64>() / n)
            .collect()
    }

    fn to_tsv(&self) -> String {
        let mut out = String::from("run\tseed\tmode\tbest_eq\tbest_simatt");
        for &alpha in &self.alphas {
            out.push_str(&format!("\talpha_saem@{}", fnum(alpha)));
        }
        out.push_str("\twall_seconds\n");
        for (run, seed, scores, eq, simatt, wall) in &self.rows {
            out.push_str(&format!(
                "{run}\t{seed}\t{}\t{}\t{}",
                self.mode,
                fnum(*eq),
                fnum(*simatt)
            ));
            for &s in scores {
                out.push_str(&format!("\t{}", fnum(s)));
            }
            out.push_str(&format!("\t{}\n", fnum(*wall)));
        }
        let n = self.rows.len() as f64;
        let mean = |pick: fn(&ReportRow) -> f64| {
            self.rows.iter().map(pick).sum::<f64>() / n
        };
        out.push_str(&format!("mean\t-\t-\t{}\t{}", fnum(mean(|r| r.3)), fnum(mean(|r| r.4))));
        for s in self.mean_alpha_scores() {
            out.push_str(&format!("\t{}", fnum(s)));
        }
        out.push_str(&format!("\t{}\n", fnum(mean(|r| r.5))));
        out
    }
}

fn cmd_detect(args: DetectArgs) -> Result<(), CliError> {
    if args.runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    check_alphas(&args.alphas)?;
    let net = load(&args.net)?;
    let base = RunConfig {
        n_habitat: args.habitats,
        generations: args.generations,
        seed: args.seed,
        lc_threshold: args.threshold,
        alphas: args.alphas.clone(),
        mode: args.mode,
        parallel: args.parallel,
        ..RunConfig::default()
    };
    base.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    let mut results = Vec::with_capacity(args.runs);
    for r in 0..args.runs {
        let config = RunConfig { seed: args.seed.wrapping_add(r as u64), ..base.clone() };
        let result = engine::run(&net, &config).map_err(|e| match e {
            EngineError::ConfigInvalid(msg) => CliError::Usage(msg),
            other => runtime(other),
        })?;
        results.push(result);
    }

    let mut runs = Vec::with_capacity(results.len());
    for (r, result) in results.iter().enumerate() {
        runs.push(run_doc(&net, result, r, &args.alphas)?);
    }
    let report = RunReport::build(&results, &args.alphas)?;
    let means = report.mean_alpha_scores();
    let n = results.len() as f64;
    let doc = ResultDoc {
        meta: MetaDoc {
            edges: args.net.edges.display().to_string(),
            attributes: args.net.attributes.display().to_string(),
            mode: args.mode,
            seed: args.seed,
            runs: args.runs,
            habitats: args.habitats,
            generations: args.generations,
            threshold: args.threshold,
            alphas: args.alphas.clone(),
            nodes: net.node_count(),
            edge_count: net.edge_count(),
        },
        runs,
        aggregate: AggregateDoc {
            mean_best_alpha_saem: args
                .alphas
                .iter()
                .zip(&means)
                .map(|(&a, &m)| (fnum(a), m))
                .collect(),
            mean_best_eq: report.rows.iter().map(|r| r.3).sum::<f64>() / n,
            mean_best_simatt: report.rows.iter().map(|r| r.4).sum::<f64>() / n,
        },
        timing: TimingDoc {
            total_seconds: results.iter().map(|r| r.wall.as_secs_f64()).sum(),
            per_run_seconds: results.iter().map(|r| r.wall.as_secs_f64()).collect(),
        },
    };

    let json = serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::Runtime(format!("serializing results: {e}")))?;
    let write = |p: &PathBuf, data: &str| {
        fs::write(p, data).map_err(|e| CliError::Runtime(format!("{}: {e}", p.display())))
    };
    write(&args.out, &format!("{json}\n"))?;
    write(&args.out.with_extension("tsv"), &report.to_tsv())?;
    if args.trace {
        let mut tsv = String::from("run\tgeneration\tbest_eq\tbest_simatt\n");
        for (r, result) in results.iter().enumerate() {
            for s in &result.trace {
                tsv.push_str(&format!(
                    "{r}\t{}\t{}\t{}\n",
                    s.generation,
                    fnum(s.best_eq),
                    fnum(s.best_simatt)
                ));
            }
        }
        write(&args.out.with_extension("trace.tsv"), &tsv)?;
    }

    for (&alpha, &mean) in args.alphas.iter().zip(&means) {
        println!("alpha={} mean_best_alpha_saem={}", fnum(alpha), fnum(mean));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// evaluate

fn parse_partition(
    net: &AttributedNetwork,
    text: &str,
) -> Result<OverlappingPartition, CliError> {
    let mut communities = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut members = Vec::new();
        for tok in line.split_whitespace() {
            let v = net.internal_id(tok).ok_or_else(|| {
                CliError::Input(format!(
                    "partition line {}: node \"{tok}\" is not in the network",
                    idx + 1
                ))
            })?;
            members.push(v);
        }
        communities.push(members);
    }
    OverlappingPartition::new(net.node_count(), communities)
        .map_err(|e| CliError::Input(format!("partition: {e}")))
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    check_alphas(&args.alphas)?;
    let net = load(&args.net)?;
    let text = fs::read_to_string(&args.partition)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.partition.display())))?;
    let part = parse_partition(&net, &text)?;
    let (part, dropped) = part.drop_singletons();
    if dropped > 0 {
        let plural = if dropped == 1 { "y" } else { "ies" };
        eprintln!("warning: dropped {dropped} singleton communit{plural}");
    }
    if part.community_count() == 0 {
        return Err(CliError::Input(
            "no community of size ≥ 2 remains after dropping singletons".into(),
        ));
    }
    let eq = objectives::extended_modularity(&net, &part).map_err(runtime)?;
    let simatt = objectives::sim_att(&net, &part).map_err(runtime)?;
    println!("eq={}", fnum(eq));
    println!("simatt={}", fnum(simatt));
    for &alpha in &args.alphas {
        let score = objectives::alpha_saem(simatt, eq, alpha).map_err(runtime)?;
        println!("alpha_saem@{}={}", fnum(alpha), fnum(score));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// ovset

fn cmd_ovset(args: OvsetArgs) -> Result<(), CliError> {
    if !(args.threshold.is_finite() && args.threshold >= 0.0) {
        return Err(CliError::Usage(format!(
            "--threshold must be finite and ≥ 0, got {}",
            args.threshold
        )));
    }
    let net = load(&args.net)?;
    let mut rng = engine::stream(args.seed, engine::DOMAIN_OVSET, 0, 0);
    let ovset = overlap::find_ovset(&net, args.threshold, &mut rng);
    let mut out = String::new();
    for &v in ovset.members() {
        out.push_str(net.external_id(v));
        out.push('\n');
    }
    print!("{out}");
    Ok(())
}
