//! The `gma` command line: topology generation, path allocation reports,
//! exhaustive verification and cover sweeps.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use gma_core::fixture;
use gma_core::graph::write_graph_json;
use gma_core::{Rational, Resource};

use commands::{allocate, cover, generate, verify};
use config::{parse_alpha, ArithmeticMode, ExperimentConfig, SweepPoint, VerifyBudget};
use error::{CliError, CliResult};
use io::{graph_id, load_graph, output_dir, read_text, write_atomic};

#[derive(Debug, Parser)]
#[command(name = "gma", version, about = "Path allocations from per-node allocation matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate scale-free topologies with proportional sharing matrices
    Generate(GenerateArgs),
    /// Print A1, A2 and GMA allocations of one path
    Allocate(AllocateArgs),
    /// Relay a reservation hop by hop with a drop threshold
    Reserve(ReserveArgs),
    /// Run audits and property checks exhaustively on small graphs
    Verify(VerifyArgs),
    /// Write cover CSV reports for graph files
    Cover(CoverArgs),
    /// Generate every topology of an experiment and report its cover
    Sweep(SweepArgs),
    /// Write the worked-example graph
    Fixture(FixtureArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, conflicts_with = "config")]
    pub nodes: Option<usize>,
    /// Edges added per new node
    #[arg(long, conflicts_with = "config")]
    pub attachment: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Rescale rows in the last policy step when div exceeds the row's own capacity
    #[arg(long)]
    pub self_consistent: bool,
    #[arg(long, value_enum, default_value_t = ArithmeticMode::Exact)]
    pub mode: ArithmeticMode,
    /// Experiment file: generate every sweep point
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file, or directory with --config
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AllocateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Hops as `node:in-out,node:in-out,...`
    #[arg(long)]
    pub path: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ReserveArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub path: String,
    #[arg(long, default_value = "0")]
    pub threshold: String,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["graph", "suite"])))]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Number of random small graphs to check
    #[arg(long)]
    pub suite: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = VerifyBudget::default().max_nodes)]
    pub max_nodes: usize,
    #[arg(long, default_value_t = VerifyBudget::default().max_len)]
    pub max_len: usize,
    #[arg(long, default_value_t = VerifyBudget::default().max_walks)]
    pub max_walks: u64,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub graphs: Vec<PathBuf>,
    #[arg(long, default_values_t = ["1/10000".to_string()])]
    pub alpha: Vec<String>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=3), default_values_t = [1u64, 2, 3])]
    pub k: Vec<u64>,
    #[arg(long, value_enum, default_value_t = ArithmeticMode::Float)]
    pub mode: ArithmeticMode,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Experiment file; the desk-scale default is used without one
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory, overriding the configuration
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the effective configuration and exit
    #[arg(long)]
    pub print_config: bool,
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    /// Raise A's c-d pair allocation to 9
    #[arg(long)]
    pub modified: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Result of a command that completed: `false` means a check failed.
pub type Passed = bool;

pub fn run(cli: Cli) -> CliResult<Passed> {
    match cli.command {
        Command::Generate(a) => run_generate(a),
        Command::Allocate(a) => run_allocate(a),
        Command::Reserve(a) => run_reserve(a),
        Command::Verify(a) => run_verify(a),
        Command::Cover(a) => run_cover(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Fixture(a) => run_fixture(a),
    }
}

fn load_config(path: &std::path::Path) -> CliResult<ExperimentConfig> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn run_generate(a: GenerateArgs) -> CliResult<Passed> {
    if let Some(path) = &a.config {
        let cfg = load_config(path)?;
        cfg.validate()?;
        let dir = output_dir(a.out.as_deref().or(Some(cfg.output_dir.as_path())));
        for point in cfg.points() {
            let (file, _) = generate::write_point(&point, a.mode, &generate::graph_file(&dir, &point))?;
            println!("{}", file.display());
        }
        return Ok(true);
    }
    let (Some(nodes), Some(attachment)) = (a.nodes, a.attachment) else {
        return Err(CliError::Usage("generate needs --nodes and --attachment, or --config".into()));
    };
    let mut point = SweepPoint::new(nodes, attachment, a.seed);
    point.topology.policy_step3_strict = !a.self_consistent;
    let out = a
        .out
        .unwrap_or_else(|| generate::graph_file(&output_dir(None), &point));
    let (file, topo) = generate::write_point(&point, a.mode, &out)?;
    println!("{}", file.display());
    if topo.metadata.policy_violations > 0 {
        eprintln!(
            "note: the sharing policy left {} capacity violations (see metadata.policy_violations)",
            topo.metadata.policy_violations
        );
    }
    Ok(true)
}

fn run_allocate(a: AllocateArgs) -> CliResult<Passed> {
    let (graph, _) = load_graph::<Rational>(&a.graph)?;
    let report = allocate::allocation_report(&graph, &a.path)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("json values serialize"));
    } else {
        print!("{}", allocate::render_text(&report));
    }
    Ok(true)
}

fn run_reserve(a: ReserveArgs) -> CliResult<Passed> {
    let (graph, _) = load_graph::<Rational>(&a.graph)?;
    let threshold = Rational::parse_amount(&a.threshold)?;
    print!("{}", allocate::reservation_text(&graph, &a.path, threshold)?);
    Ok(true)
}

fn run_verify(a: VerifyArgs) -> CliResult<Passed> {
    let budget = VerifyBudget {
        max_nodes: a.max_nodes,
        max_len: a.max_len,
        max_walks: a.max_walks,
    };
    if budget.max_len == 0 {
        return Err(CliError::Usage("--max-len must be at least 1".into()));
    }
    let graphs = match (&a.graph, a.suite) {
        (Some(path), _) => {
            let (g, meta) = load_graph::<Rational>(path)?;
            vec![(graph_id(path, meta.as_ref()), g)]
        }
        (None, Some(n)) => verify::random_suite(n, a.seed, &budget),
        (None, None) => unreachable!("clap requires one input"),
    };
    let summary = verify::verify_all(&graphs, &budget)?;
    println!("{}", serde_json::to_string_pretty(&summary).expect("summaries serialize"));
    Ok(summary.ok)
}

fn run_cover(a: CoverArgs) -> CliResult<Passed> {
    let alphas = a.alpha.iter().map(|t| parse_alpha(t)).collect::<CliResult<Vec<_>>>()?;
    let ks: Vec<usize> = a.k.iter().map(|&k| k as usize).collect();
    let dir = output_dir(a.out.as_deref());
    let mut reports = Vec::new();
    for path in &a.graphs {
        let (g, meta) = load_graph::<Rational>(path)?;
        let id = graph_id(path, meta.as_ref());
        for alpha in &alphas {
            reports.push(cover::cover_report(&id, &g, alpha, &ks, a.mode)?);
        }
    }
    cover::write_reports(&dir, &reports, a.mode)?;
    println!("{}", dir.join(cover::NODE_CSV).display());
    println!("{}", dir.join(cover::SUMMARY_CSV).display());
    Ok(true)
}

fn run_sweep(a: SweepArgs) -> CliResult<Passed> {
    let mut cfg = match &a.config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig {
            output_dir: output_dir(None),
            ..ExperimentConfig::default()
        },
    };
    if let Some(out) = a.out {
        cfg.output_dir = out;
    }
    cfg.validate()?;
    let text = serde_json::to_string_pretty(&cfg).expect("configs serialize") + "\n";
    if a.print_config {
        print!("{text}");
        return Ok(true);
    }
    let dir = cfg.output_dir.clone();
    write_atomic(&dir.join("config.json"), text.as_bytes())?;
    let alphas = cfg.alpha_values()?;
    let points = cfg.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let graph_dir = dir.join("graphs");
    let per_point = pool.install(|| {
        points
            .par_iter()
            .map(|p| {
                let (_, topo) = generate::write_point(p, cfg.mode, &generate::graph_file(&graph_dir, p))?;
                alphas
                    .iter()
                    .map(|alpha| cover::cover_report(&p.id, &topo.graph, alpha, &cfg.ks, cfg.mode))
                    .collect::<CliResult<Vec<_>>>()
            })
            .collect::<CliResult<Vec<_>>>()
    })?;
    let reports: Vec<_> = per_point.into_iter().flatten().collect();
    cover::write_reports(&dir, &reports, cfg.mode)?;
    println!("{} graphs, reports in {}", points.len(), dir.display());
    Ok(true)
}

fn run_fixture(a: FixtureArgs) -> CliResult<Passed> {
    let g = if a.modified {
        fixture::modified_graph()
    } else {
        fixture::example_graph()
    };
    let text = write_graph_json(&g, None);
    match a.out {
        Some(path) => {
            write_atomic(&path, text.as_bytes())?;
            println!("{}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(true)
}
