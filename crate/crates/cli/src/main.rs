use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wrapfs_core::metaheuristics::{
    ba_optimize, binarize_position, ica_optimize, BaConfig, IcaConfig, OptimizeResult, Position,
};
use wrapfs_core::pipeline::{self, parse_classifier_list, ExperimentConfig};
use wrapfs_core::{Error, Result};

const EXIT_CONFIG: u8 = 1;
const EXIT_IO: u8 = 2;

/// Wrapper feature selection with ICA or the bat algorithm.
#[derive(Debug, Parser)]
#[command(name = "wrapfs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a with/without feature-selection experiment and write a report.
    Run(RunArgs),
    /// Run an optimizer on a benchmark function over several seeds.
    BenchOpt(BenchOptArgs),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Dataset: UCI WDBC format, or CSV with a header and a 0/1 `label` column.
    #[arg(long)]
    data: Option<PathBuf>,
    /// ica, ba or none.
    #[arg(long)]
    optimizer: Option<String>,
    /// Comma-separated classifier names, or `all`.
    #[arg(long)]
    classifiers: Option<String>,
    #[arg(long, env = "WRAPFS_SEED")]
    seed: Option<u64>,
    /// Fraction of rows used for training.
    #[arg(long)]
    split: Option<f64>,
    #[arg(long = "cv-k")]
    cv_k: Option<usize>,
    /// Report file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Flat `key = value` file applied before the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record per-row wall-clock time (makes reports differ between runs).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BenchFunction {
    /// Sum of squares; optimum 0 at the origin.
    Sphere,
    /// Fraction of unset bits after thresholding; optimum 0 with all bits set.
    Onemax,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BenchOptimizer {
    Ica,
    Ba,
}

#[derive(Debug, clap::Args)]
struct BenchOptArgs {
    #[arg(long, value_enum)]
    function: BenchFunction,
    #[arg(long, value_enum)]
    optimizer: BenchOptimizer,
    #[arg(long, default_value_t = 10)]
    dim: usize,
    /// Number of seeds, starting at `--seed`.
    #[arg(long, default_value_t = 10)]
    runs: u64,
    #[arg(long, env = "WRAPFS_SEED", default_value_t = 0)]
    seed: u64,
    /// Flat `key = value` file with `ica.*` / `ba.*` overrides.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_config_file(path)?;
    }
    if let Some(data) = &args.data {
        cfg.data_path = data.clone();
    }
    if let Some(o) = &args.optimizer {
        cfg.optimizer = o.parse()?;
    }
    if let Some(c) = &args.classifiers {
        cfg.classifiers = parse_classifier_list(c)?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(split) = args.split {
        cfg.split_fraction = split;
    }
    if let Some(k) = args.cv_k {
        cfg.cv_k = k;
    }
    if let Some(out) = &args.output {
        cfg.output_path = Some(out.clone());
    }
    if let Some(f) = &args.format {
        cfg.output_format = f.parse()?;
    }
    cfg.record_timing |= args.timing;
    if cfg.data_path.as_os_str().is_empty() {
        return Err(Error::InvalidConfig("no dataset given (use --data)".into()));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: &RunArgs) -> Result<()> {
    let cfg = build_config(args)?;
    let report = pipeline::run_experiment(&cfg)?;
    match &cfg.output_path {
        Some(path) => {
            pipeline::emit_report(&report, cfg.output_format, path)?;
            eprintln!("wrote {} rows to {}", report.rows.len(), path.display());
        }
        None => print!("{}", pipeline::render_report(&report, cfg.output_format)?),
    }
    Ok(())
}

fn bench_opt(args: &BenchOptArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_config_file(path)?;
    }
    let d = args.dim;
    let sphere = |p: &Position| p.coords().iter().map(|x| x * x).sum::<f64>();
    let onemax = |p: &Position| {
        let mask = binarize_position(p);
        (mask.len() - mask.count_selected()) as f64 / mask.len() as f64
    };
    let mut costs = Vec::new();
    for seed in args.seed..args.seed + args.runs {
        let r: OptimizeResult = match (args.optimizer, args.function) {
            (BenchOptimizer::Ica, BenchFunction::Sphere) => ica_optimize(
                sphere,
                d,
                &IcaConfig {
                    seed,
                    ..cfg.ica.clone()
                },
            )?,
            (BenchOptimizer::Ica, BenchFunction::Onemax) => ica_optimize(
                onemax,
                d,
                &IcaConfig {
                    seed,
                    ..cfg.ica.clone()
                },
            )?,
            (BenchOptimizer::Ba, BenchFunction::Sphere) => ba_optimize(
                sphere,
                d,
                &BaConfig {
                    seed,
                    ..cfg.ba.clone()
                },
            )?,
            (BenchOptimizer::Ba, BenchFunction::Onemax) => ba_optimize(
                onemax,
                d,
                &BaConfig {
                    seed,
                    ..cfg.ba.clone()
                },
            )?,
        };
        println!(
            "seed {seed} best_cost {:.6} evaluations {}",
            r.best_cost, r.evaluations
        );
        costs.push(r.best_cost);
    }
    if !costs.is_empty() {
        costs.sort_by(f64::total_cmp);
        let m = costs.len();
        let median = if m % 2 == 1 {
            costs[m / 2]
        } else {
            0.5 * (costs[m / 2 - 1] + costs[m / 2])
        };
        println!("median best_cost {median:.6}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Run(args) => run(args),
        Command::BenchOpt(args) => bench_opt(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::from(EXIT_IO)
            }
        }
    }
}
