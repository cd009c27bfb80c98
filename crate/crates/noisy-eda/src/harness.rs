//! Seeded, parallel experiment running.
//!
//! An experiment is one optimiser configuration run for many independent
//! trials. Each trial derives its own RNG seed from the master seed and its
//! trial index, so results do not depend on scheduling: running trials in
//! any order, on any number of threads, produces identical records.

use noisy_eda_core::{
    run, BitString, OptimizerConfig, ProbabilityVector, Problem, ProblemSpec, TraceSink,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Environment variable capping harness parallelism; 0 or unset lets rayon
/// pick a thread count.
pub const THREADS_ENV_VAR: &str = "NOISY_EDA_THREADS";

/// One experiment: an optimiser, a problem and a trial count.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub optimizer: OptimizerConfig,
    pub problem: ProblemSpec,
    pub trials: u32,
    pub master_seed: u64,
}

impl ExperimentConfig {
    /// Fitness evaluations each trial may spend.
    pub fn budget(&self) -> u64 {
        self.optimizer.budget
    }

    pub fn validate(&self) -> Result<()> {
        self.optimizer.validate()?;
        self.problem.validate()?;
        if self.problem.dimension() != self.optimizer.d {
            return Err(Error::Config(format!(
                "problem dimension {} does not match optimizer dimension {}",
                self.problem.dimension(),
                self.optimizer.d
            )));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// Everything one trial produces.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    /// True (noise-free) fitness of the anytime recommendation after each
    /// evaluation; entry `i` corresponds to evaluation `i + 1`.
    pub trace: Vec<f64>,
    /// Whether the optimum string was sampled and evaluated at least once.
    pub hit_optimum: bool,
    pub final_recommendation: BitString,
    /// Final probability vector, absent for the hill climber.
    pub final_model: Option<ProbabilityVector>,
    pub evals_used: u64,
}

/// Derives the per-trial RNG seed: a splitmix64 finalisation of the master
/// seed offset by the trial index. Nearby master seeds and indices land on
/// unrelated streams.
pub fn trial_seed(master_seed: u64, trial_index: u32) -> u64 {
    let mut z =
        master_seed.wrapping_add((u64::from(trial_index) + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct FitnessTraceSink<'a> {
    problem: &'a ProblemSpec,
    values: Vec<f64>,
}

impl TraceSink for FitnessTraceSink<'_> {
    fn record(&mut self, evals_used: u64, recommendation: &BitString) {
        debug_assert_eq!(evals_used as usize, self.values.len() + 1);
        self.values.push(self.problem.true_fitness(recommendation));
    }
}

/// Runs a single seeded trial.
pub fn run_trial(config: &ExperimentConfig, trial_index: u32) -> Result<TrialRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(config.master_seed, trial_index));
    let mut sink = FitnessTraceSink {
        problem: &config.problem,
        values: Vec::with_capacity(config.budget() as usize),
    };
    let result = run(&config.optimizer, &config.problem, &mut rng, &mut sink)?;
    debug_assert_eq!(sink.values.len() as u64, result.evals_used);
    Ok(TrialRecord {
        trace: sink.values,
        hit_optimum: result.hit_optimum,
        final_recommendation: result.recommendation,
        final_model: result.model,
        evals_used: result.evals_used,
    })
}

/// Runs all trials of `config`, in trial order.
pub fn run_trials(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    let indices: Vec<u32> = (0..config.trials).collect();
    let work = || {
        indices
            .par_iter()
            .map(|&i| run_trial(config, i))
            .collect::<Result<Vec<_>>>()
    };
    match thread_pool()? {
        Some(pool) => pool.install(work),
        None => work(),
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let raw = match std::env::var(THREADS_ENV_VAR) {
        Ok(value) => value,
        Err(std::env::VarError::NotPresent) => return Ok(None),
        Err(err) => {
            return Err(Error::Environment {
                name: THREADS_ENV_VAR,
                reason: err.to_string(),
            })
        }
    };
    let threads: usize = raw.trim().parse().map_err(|_| Error::Environment {
        name: THREADS_ENV_VAR,
        reason: format!("expected a non-negative integer, got `{raw}`"),
    })?;
    if threads == 0 {
        return Ok(None);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|err| Error::Environment {
            name: THREADS_ENV_VAR,
            reason: err.to_string(),
        })
}

/// Aggregate statistics over the trials of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    /// Trials in which the optimum string was evaluated at least once.
    pub nho: u32,
    /// Mean true fitness of the final recommendations.
    pub rq_mean: f64,
    /// Standard error of that mean: sample standard deviation (n - 1
    /// denominator) over sqrt(trials).
    pub rq_stderr: f64,
    /// Anytime curve: (mean, standard error) of the recommendation's true
    /// fitness after evaluation `i + 1`, one entry per budgeted evaluation.
    pub curve: Vec<(f64, f64)>,
    /// Elementwise mean of the final probability vectors, when the
    /// algorithm keeps a model.
    pub mean_final_p: Option<Vec<f64>>,
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt() / n.sqrt())
}

/// Aggregates trial records into summary statistics.
///
/// Traces shorter than the budget (early convergence, or leftover budget
/// too small for another iteration) are padded by carrying the last value
/// forward; a trial that never stepped contributes its final
/// recommendation's fitness throughout. The curve's final entry therefore
/// aggregates exactly the same values as `rq_mean`.
pub fn summarize(
    problem: &ProblemSpec,
    budget: u64,
    records: &[TrialRecord],
) -> Result<SummaryStats> {
    if records.is_empty() {
        return Err(Error::Config("cannot summarise zero trials".into()));
    }
    let finals: Vec<f64> = records
        .iter()
        .map(|r| problem.true_fitness(&r.final_recommendation))
        .collect();
    let (rq_mean, rq_stderr) = mean_and_stderr(&finals);

    let mut curve = Vec::with_capacity(budget as usize);
    let mut column = vec![0.0; records.len()];
    for e in 0..budget as usize {
        for (t, record) in records.iter().enumerate() {
            column[t] = if record.trace.is_empty() {
                finals[t]
            } else {
                record.trace[e.min(record.trace.len() - 1)]
            };
        }
        curve.push(mean_and_stderr(&column));
    }

    let nho = records.iter().filter(|r| r.hit_optimum).count() as u32;

    let mean_final_p = if records.iter().all(|r| r.final_model.is_some()) {
        let d = records[0]
            .final_model
            .as_ref()
            .expect("checked above")
            .len();
        let mut acc = vec![0.0; d];
        for record in records {
            let model = record.final_model.as_ref().expect("checked above");
            for (slot, p) in acc.iter_mut().zip(model.probs()) {
                *slot += p;
            }
        }
        let trials = records.len() as f64;
        Some(acc.into_iter().map(|total| total / trials).collect())
    } else {
        None
    };

    Ok(SummaryStats {
        nho,
        rq_mean,
        rq_stderr,
        curve,
        mean_final_p,
    })
}

/// Runs an experiment end to end: all trials, then aggregation.
pub fn run_experiment(config: &ExperimentConfig) -> Result<SummaryStats> {
    let records = run_trials(config)?;
    summarize(&config.problem, config.budget(), &records)
}

/// Runs several experiments in turn, returning stats in input order.
pub fn sweep(experiments: &[ExperimentConfig]) -> Result<Vec<SummaryStats>> {
    experiments.iter().map(run_experiment).collect()
}
