//! The `noisy-eda` command line: `run`, `reproduce` and `plot`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use noisy_eda_core::{Algorithm, OptimizerConfig, ProblemSpec};

use crate::config::{self, load_config_file, resolve, to_raw, KSpec, RawExperiment};
use crate::csvio::{self, CurveData, CurvePoint, SummaryRow};
use crate::error::{Error, Result};
use crate::harness::{run_experiment, trial_seed, ExperimentConfig, SummaryStats};
use crate::manifest::RunManifest;
use crate::plot::render_curves;

#[derive(Debug, Parser)]
#[command(
    name = "noisy-eda",
    version,
    about = "Compact GA variants benchmarked on noisy binary problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one or more configured experiments and write CSV reports.
    Run(RunArgs),
    /// Re-run a whole benchmark sweep and write its summary table.
    Reproduce(ReproduceArgs),
    /// Render curve CSVs into one SVG chart with standard-error bands.
    Plot(PlotArgs),
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// TOML experiment description; the flags below override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Algorithm: cga, mscga, swcga or rmhc.
    #[arg(long)]
    pub algorithm: Option<String>,
    /// Problem: onemax or pmax.
    #[arg(long)]
    pub problem: Option<String>,
    /// Virtual population size: a number or an expression in the dimension
    /// such as "5d" or "d/2".
    #[arg(long)]
    pub k: Option<String>,
    /// Samples per iteration (mscga).
    #[arg(long)]
    pub n: Option<usize>,
    /// Window width (swcga).
    #[arg(long)]
    pub w: Option<usize>,
    /// Evaluations per candidate (rmhc).
    #[arg(long)]
    pub r: Option<u64>,
    /// Problem dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Gaussian noise variance (onemax only).
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Fitness evaluations per trial.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Independent trials per experiment.
    #[arg(long)]
    pub trials: Option<u32>,
    /// Master seed; per-trial seeds derive from it.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also render the anytime curves to plot.svg.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Which sweep to run.
    #[arg(value_parser = ["onemax", "pmax"])]
    pub table: String,
    /// Independent trials per experiment.
    #[arg(long)]
    pub trials: Option<u32>,
    /// Fitness evaluations per trial.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Problem dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Master seed for the whole sweep.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Curve CSV files (evals,mean_true_fitness,stderr).
    #[arg(required = true)]
    pub curves: Vec<PathBuf>,
    /// Output SVG path.
    #[arg(long, default_value = "plot.svg")]
    pub out: PathBuf,
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Reproduce(args) => cmd_reproduce(&args),
        Command::Plot(args) => cmd_plot(&args),
    }
}

fn ensure_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn write_bytes(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn experiment_label(config: &ExperimentConfig) -> String {
    match config.optimizer.algorithm {
        Algorithm::Cga { k } => format!("cga k={k}"),
        Algorithm::MsCga { k, n } => format!("mscga k={k} n={n}"),
        Algorithm::SwCga { k, w } => format!("swcga k={k} w={w}"),
        Algorithm::Rmhc { r } => format!("rmhc r={r}"),
    }
}

fn summary_row(config: &ExperimentConfig, stats: &SummaryStats) -> SummaryRow {
    SummaryRow {
        algorithm: config.optimizer.algorithm.name().to_owned(),
        k: config.optimizer.algorithm.k(),
        param: config.optimizer.algorithm.param(),
        nho: stats.nho,
        rq_mean: stats.rq_mean,
        rq_stderr: stats.rq_stderr,
    }
}

fn curve_data(label: String, stats: &SummaryStats) -> CurveData {
    CurveData {
        label,
        points: stats
            .curve
            .iter()
            .enumerate()
            .map(|(i, &(mean, stderr))| CurvePoint {
                evals: i as u64 + 1,
                mean,
                stderr,
            })
            .collect(),
    }
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let started = Instant::now();
    let (file_experiments, file_out_dir) = match &args.config {
        Some(path) => {
            let file = load_config_file(path)?;
            (file.experiments(), file.out_dir.clone())
        }
        None => (vec![RawExperiment::default()], None),
    };
    let overrides = RawExperiment {
        algorithm: args.algorithm.clone(),
        problem: args.problem.clone(),
        d: args.d,
        k: args.k.clone().map(KSpec::Formula),
        n: args.n,
        w: args.w,
        r: args.r,
        sigma2: args.sigma2,
        budget: args.budget,
        trials: args.trials,
        seed: args.seed,
    };
    let configs = file_experiments
        .iter()
        .map(|raw| resolve(&overrides.clone().or(raw)))
        .collect::<Result<Vec<_>>>()?;

    let out_dir = args
        .out
        .clone()
        .or(file_out_dir)
        .unwrap_or_else(|| PathBuf::from(config::DEFAULT_OUT_DIR));
    ensure_dir(&out_dir)?;

    let multi = configs.len() > 1;
    let mut files = Vec::new();
    let mut rows = Vec::new();
    let mut curves = Vec::new();
    for (index, experiment) in configs.iter().enumerate() {
        let stats = run_experiment(experiment)?;
        let label = experiment_label(experiment);

        let (dir, prefix) = if multi {
            let sub_name = format!("{index:02}-{}", experiment.optimizer.algorithm.name());
            let sub = out_dir.join(&sub_name);
            ensure_dir(&sub)?;
            (sub, format!("{sub_name}/"))
        } else {
            (out_dir.clone(), String::new())
        };

        csvio::write_curve(&dir.join("curve.csv"), &stats.curve)?;
        files.push(format!("{prefix}curve.csv"));
        if let Some(mean_p) = &stats.mean_final_p {
            csvio::write_final_p(&dir.join("final_p.csv"), mean_p)?;
            files.push(format!("{prefix}final_p.csv"));
        }

        println!(
            "{label}: NHO {}/{}, RQ {:.4} ± {:.4}",
            stats.nho, experiment.trials, stats.rq_mean, stats.rq_stderr
        );
        rows.push(summary_row(experiment, &stats));
        curves.push(curve_data(label, &stats));
    }

    csvio::write_summary(&out_dir.join("summary.csv"), &rows)?;
    files.push("summary.csv".into());

    if args.plot {
        write_bytes(&out_dir.join("plot.svg"), &render_curves(&curves)?)?;
        files.push("plot.svg".into());
    }

    RunManifest::new(
        "run",
        &out_dir,
        started.elapsed(),
        configs.iter().map(to_raw).collect(),
        files,
    )
    .write(&out_dir)?;
    Ok(())
}

/// The (n, w) column pairs of the sweep tables. The last pair puts the
/// two-sample variant next to the width-1 window.
const SWEEP_PAIRS: [(usize, usize); 9] = [
    (50, 50),
    (40, 40),
    (30, 30),
    (20, 20),
    (10, 10),
    (8, 8),
    (6, 6),
    (4, 4),
    (2, 1),
];

const ONEMAX_K_MULTIPLIERS: [f64; 7] = [50.0, 20.0, 10.0, 5.0, 2.0, 1.0, 0.5];
const PMAX_K_MULTIPLIERS: [f64; 8] = [100.0, 50.0, 20.0, 10.0, 5.0, 2.0, 1.0, 0.5];

fn cmd_reproduce(args: &ReproduceArgs) -> Result<()> {
    let started = Instant::now();
    let d = args.d.unwrap_or(config::DEFAULT_D);
    let budget = args.budget.unwrap_or(config::DEFAULT_BUDGET);
    let trials = args.trials.unwrap_or(config::DEFAULT_TRIALS);
    let master_seed = args.seed.unwrap_or(config::DEFAULT_SEED);
    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(config::DEFAULT_OUT_DIR));

    let (problem, multipliers): (ProblemSpec, &[f64]) = match args.table.as_str() {
        "onemax" => (
            ProblemSpec::NoisyOneMax { d, sigma2: 1.0 },
            &ONEMAX_K_MULTIPLIERS,
        ),
        "pmax" => (ProblemSpec::PMax { d }, &PMAX_K_MULTIPLIERS),
        other => {
            return Err(Error::Config(format!(
                "unknown sweep `{other}`; expected onemax or pmax"
            )))
        }
    };

    ensure_dir(&out_dir)?;

    let mut table = String::new();
    table.push_str("k,n,mscga_nho,mscga_rq,mscga_rq_stderr,w,swcga_nho,swcga_rq,swcga_rq_stderr\n");
    let mut experiments = Vec::new();
    // Every cell gets its own derived master seed so cells are mutually
    // independent and the table does not change when run partially.
    let mut cell = 0u32;
    for &multiplier in multipliers {
        let k = multiplier * d as f64;
        for &(n, w) in &SWEEP_PAIRS {
            let mscga = ExperimentConfig {
                optimizer: OptimizerConfig {
                    d,
                    budget,
                    algorithm: Algorithm::MsCga { k, n },
                },
                problem: problem.clone(),
                trials,
                master_seed: trial_seed(master_seed, cell),
            };
            cell += 1;
            let swcga = ExperimentConfig {
                optimizer: OptimizerConfig {
                    d,
                    budget,
                    algorithm: Algorithm::SwCga { k, w },
                },
                problem: problem.clone(),
                trials,
                master_seed: trial_seed(master_seed, cell),
            };
            cell += 1;

            let ms = run_experiment(&mscga)?;
            let sw = run_experiment(&swcga)?;
            eprintln!(
                "k={k} n={n} w={w}: mscga RQ {:.4}, swcga RQ {:.4}",
                ms.rq_mean, sw.rq_mean
            );
            writeln!(
                table,
                "{k},{n},{},{},{},{w},{},{},{}",
                ms.nho, ms.rq_mean, ms.rq_stderr, sw.nho, sw.rq_mean, sw.rq_stderr
            )
            .expect("writing to a string cannot fail");
            experiments.push(to_raw(&mscga));
            experiments.push(to_raw(&swcga));
        }
    }

    let table_name = format!("table_{}.csv", args.table);
    write_bytes(&out_dir.join(&table_name), &table)?;

    RunManifest::new(
        format!("reproduce {}", args.table),
        &out_dir,
        started.elapsed(),
        experiments,
        vec![table_name],
    )
    .write(&out_dir)?;
    Ok(())
}

fn cmd_plot(args: &PlotArgs) -> Result<()> {
    let curves = args
        .curves
        .iter()
        .map(|path| csvio::read_curve(path))
        .collect::<Result<Vec<_>>>()?;
    write_bytes(&args.out, &render_curves(&curves)?)?;
    println!("wrote {}", args.out.display());
    Ok(())
}
