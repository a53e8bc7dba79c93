//! Seeded experiment driver for sampled centrality estimates.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod experiment;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{EllList, ExperimentConfig, InputFormat, Measure, StrategyChoice};
use sampled_centrality::generate::{generate, GeneratorSpec};

#[derive(Parser)]
#[command(
    name = "sampled-centrality",
    version,
    about = "Approximate node centralities from sampled adjacency columns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample, evaluate, rank and compare against a reference ranking.
    Run(RunArgs),
    /// Write a synthetic graph as an edge list.
    Generate {
        /// e.g. `er:n=60,p=0.1,seed=1`, `pa:n=2000,m=5`, `star:leaves=3`
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Edge list or Matrix Market file.
    #[arg(long, conflicts_with = "generate", required_unless_present = "generate")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::Edgelist)]
    format: InputFormat,
    /// Read edge lists as undirected.
    #[arg(long)]
    undirected: bool,
    /// Synthetic graph spec instead of --input.
    #[arg(long)]
    generate: Option<String>,
    #[arg(long, value_enum)]
    measure: Measure,
    /// Scale parameter. Defaults to 1 for exponential measures.
    #[arg(long)]
    gamma: Option<f64>,
    /// Set gamma to this value divided by the estimated spectral radius.
    /// Katz defaults to 0.5.
    #[arg(long, conflicts_with = "gamma")]
    gamma_scale: Option<f64>,
    /// Rank-one shift for the Perron iteration.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Sample sizes: `200`, `100,200` or `500..3000[:step]`.
    #[arg(long)]
    ell: EllList,
    #[arg(long, value_enum, default_value_t = StrategyChoice::Guided)]
    strategy: StrategyChoice,
    /// First seed; trials use consecutive seeds from here.
    #[arg(long, env = "SAMPLED_CENTRALITY_SEED", default_value_t = 0)]
    seed: u64,
    /// Explicit seed list, overrides --seed and --trials.
    #[arg(long, value_delimiter = ',', conflicts_with = "trials")]
    seeds: Option<Vec<u64>>,
    /// Runs per (ell, strategy); 50 or 100 give stable timing tables.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Report depth.
    #[arg(long, default_value_t = sampled_centrality::ranking::DEFAULT_K)]
    k: usize,
    /// Largest order for the dense reference.
    #[arg(long, default_value_t = sampled_centrality::oracle::DENSE_CAP)]
    dense_cap: usize,
    /// Krylov steps for the reference on graphs above the dense cap.
    #[arg(long, default_value_t = 100)]
    krylov_k: usize,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report (the default).
    #[arg(long)]
    json: bool,
    /// CSV ranking table. With --json as well, written next to --out with a .csv extension.
    #[arg(long)]
    csv: bool,
    /// Per-(ell, strategy) summary as CSV on stderr.
    #[arg(long)]
    summary: bool,
    /// Include wall-clock timing in the JSON report.
    #[arg(long)]
    timing: bool,
}

impl RunArgs {
    fn config(&self) -> ExperimentConfig {
        let seeds = match &self.seeds {
            Some(s) => s.clone(),
            None => (0..self.trials).map(|t| self.seed.wrapping_add(t)).collect(),
        };
        ExperimentConfig {
            input: self.input.clone(),
            format: self.format,
            directed: !self.undirected,
            generate: self.generate.clone(),
            measure: self.measure,
            gamma: self.gamma,
            gamma_scale: self.gamma_scale,
            epsilon: self.epsilon,
            ell: self.ell.clone(),
            strategy: self.strategy,
            seeds,
            k: self.k,
            dense_cap: self.dense_cap,
            krylov_k: self.krylov_k,
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: &RunArgs) -> Result<bool, String> {
    let cfg = args.config();
    let (report, g) = experiment::run(&cfg).map_err(|e| e.to_string())?;
    let want_json = args.json || !args.csv;
    if want_json {
        emit(args.out.as_deref(), &output::to_json(&report, args.timing)).map_err(|e| e.to_string())?;
    }
    if args.csv {
        let text = output::to_csv(&report, &g).map_err(|e| e.to_string())?;
        let path = match (&args.out, want_json) {
            (Some(p), true) => Some(p.with_extension("csv")),
            (Some(p), false) => Some(p.clone()),
            (None, _) => None,
        };
        emit(path.as_deref(), &text).map_err(|e| e.to_string())?;
    }
    eprint!("{}", output::timing_table(&report));
    if args.summary {
        eprint!("{}", output::summary_csv(&report));
    }
    for r in report.runs.iter().filter(|r| r.status != "ok") {
        eprintln!(
            "run failed: ell={} strategy={} seed={}: {}",
            r.ell,
            r.strategy,
            r.seed,
            r.error.as_deref().unwrap_or("")
        );
    }
    Ok(report.complete)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Generate { spec, out } => spec
            .parse::<GeneratorSpec>()
            .and_then(|s| generate(&s))
            .map_err(|e| e.to_string())
            .and_then(|g| emit(out.as_deref(), &g.to_edge_list()).map_err(|e| e.to_string()))
            .map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
