//! Experiment configuration: TOML files, command-line overrides, `k`
//! expressions and validation.
//!
//! A config file's top-level keys act as defaults; each `[[experiment]]`
//! entry overrides them. A file without an experiment list describes a
//! single experiment. Keys that do not apply to the chosen algorithm or
//! problem are rejected rather than ignored.

use std::path::{Path, PathBuf};

use noisy_eda_core::{Algorithm, OptimizerConfig, ProblemSpec};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::ExperimentConfig;

pub const DEFAULT_D: usize = 100;
pub const DEFAULT_BUDGET: u64 = 1000;
pub const DEFAULT_TRIALS: u32 = 100;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SIGMA2: f64 = 1.0;
pub const DEFAULT_OUT_DIR: &str = "results";

/// `k` as written in configs: either a plain number or an expression in
/// the dimension, such as `"5d"`, `"d/2"` or `"d"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KSpec {
    Number(f64),
    Formula(String),
}

impl KSpec {
    /// Resolves against dimension `d` and checks the result is usable.
    pub fn resolve(&self, d: usize) -> Result<f64> {
        let k = match self {
            KSpec::Number(x) => *x,
            KSpec::Formula(s) => parse_k_formula(s, d)?,
        };
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::Config(format!(
                "k must resolve to a positive finite number, got {k}"
            )));
        }
        Ok(k)
    }
}

fn parse_k_formula(s: &str, d: usize) -> Result<f64> {
    let t = s.trim();
    let dims = d as f64;
    if t == "d" {
        return Ok(dims);
    }
    if let Some(divisor) = t.strip_prefix("d/") {
        let x: f64 = divisor.trim().parse().map_err(|_| bad_k(s))?;
        return Ok(dims / x);
    }
    if let Some(multiplier) = t.strip_suffix('d') {
        let x: f64 = multiplier.trim().parse().map_err(|_| bad_k(s))?;
        return Ok(x * dims);
    }
    t.parse().map_err(|_| bad_k(s))
}

fn bad_k(s: &str) -> Error {
    Error::Config(format!(
        "cannot parse k expression `{s}`; use a number, `<x>d`, `d/<x>` or `d`"
    ))
}

/// One experiment as written in a config file or assembled from flags.
/// Every key is optional so that defaults can be layered.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawExperiment {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<KSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RawExperiment {
    /// Returns `self` with missing keys filled in from `fallback`.
    pub fn or(self, fallback: &RawExperiment) -> RawExperiment {
        RawExperiment {
            algorithm: self.algorithm.or_else(|| fallback.algorithm.clone()),
            problem: self.problem.or_else(|| fallback.problem.clone()),
            d: self.d.or(fallback.d),
            k: self.k.or_else(|| fallback.k.clone()),
            n: self.n.or(fallback.n),
            w: self.w.or(fallback.w),
            r: self.r.or(fallback.r),
            sigma2: self.sigma2.or(fallback.sigma2),
            budget: self.budget.or(fallback.budget),
            trials: self.trials.or(fallback.trials),
            seed: self.seed.or(fallback.seed),
        }
    }
}

/// A parsed config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub algorithm: Option<String>,
    pub problem: Option<String>,
    pub d: Option<usize>,
    pub k: Option<KSpec>,
    pub n: Option<usize>,
    pub w: Option<usize>,
    pub r: Option<u64>,
    pub sigma2: Option<f64>,
    pub budget: Option<u64>,
    pub trials: Option<u32>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub experiment: Vec<RawExperiment>,
}

impl ConfigFile {
    fn defaults(&self) -> RawExperiment {
        RawExperiment {
            algorithm: self.algorithm.clone(),
            problem: self.problem.clone(),
            d: self.d,
            k: self.k.clone(),
            n: self.n,
            w: self.w,
            r: self.r,
            sigma2: self.sigma2,
            budget: self.budget,
            trials: self.trials,
            seed: self.seed,
        }
    }

    /// The experiments this file describes, with the top-level defaults
    /// folded in.
    pub fn experiments(&self) -> Vec<RawExperiment> {
        let defaults = self.defaults();
        if self.experiment.is_empty() {
            vec![defaults]
        } else {
            self.experiment
                .iter()
                .map(|e| e.clone().or(&defaults))
                .collect()
        }
    }
}

pub fn load_config_file(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    toml::from_str(&text).map_err(|err| Error::ConfigFile {
        path: path.to_owned(),
        message: err.to_string(),
    })
}

fn missing(key: &str, target: &str) -> Error {
    Error::Config(format!("{target} requires key `{key}`"))
}

fn reject_key(present: bool, key: &str, target: &str) -> Result<()> {
    if present {
        return Err(Error::Config(format!(
            "key `{key}` does not apply to {target}"
        )));
    }
    Ok(())
}

fn require_k(raw: &RawExperiment, d: usize, target: &str) -> Result<f64> {
    raw.k
        .as_ref()
        .ok_or_else(|| missing("k", target))?
        .resolve(d)
}

/// Turns a raw experiment into a validated [`ExperimentConfig`], applying
/// defaults and rejecting keys that are meaningless for the chosen
/// algorithm or problem.
pub fn resolve(raw: &RawExperiment) -> Result<ExperimentConfig> {
    let algorithm_name = raw.algorithm.as_deref().ok_or_else(|| {
        Error::Config("missing required key `algorithm` (cga, mscga, swcga or rmhc)".into())
    })?;
    let d = raw.d.unwrap_or(DEFAULT_D);
    let budget = raw.budget.unwrap_or(DEFAULT_BUDGET);
    let trials = raw.trials.unwrap_or(DEFAULT_TRIALS);
    let master_seed = raw.seed.unwrap_or(DEFAULT_SEED);

    let algorithm = match algorithm_name {
        "cga" => {
            reject_key(raw.n.is_some(), "n", "algorithm `cga`")?;
            reject_key(raw.w.is_some(), "w", "algorithm `cga`")?;
            reject_key(raw.r.is_some(), "r", "algorithm `cga`")?;
            Algorithm::Cga {
                k: require_k(raw, d, "algorithm `cga`")?,
            }
        }
        "mscga" => {
            reject_key(raw.w.is_some(), "w", "algorithm `mscga`")?;
            reject_key(raw.r.is_some(), "r", "algorithm `mscga`")?;
            Algorithm::MsCga {
                k: require_k(raw, d, "algorithm `mscga`")?,
                n: raw.n.ok_or_else(|| missing("n", "algorithm `mscga`"))?,
            }
        }
        "swcga" => {
            reject_key(raw.n.is_some(), "n", "algorithm `swcga`")?;
            reject_key(raw.r.is_some(), "r", "algorithm `swcga`")?;
            Algorithm::SwCga {
                k: require_k(raw, d, "algorithm `swcga`")?,
                w: raw.w.ok_or_else(|| missing("w", "algorithm `swcga`"))?,
            }
        }
        "rmhc" => {
            reject_key(raw.k.is_some(), "k", "algorithm `rmhc`")?;
            reject_key(raw.n.is_some(), "n", "algorithm `rmhc`")?;
            reject_key(raw.w.is_some(), "w", "algorithm `rmhc`")?;
            Algorithm::Rmhc {
                r: raw.r.ok_or_else(|| missing("r", "algorithm `rmhc`"))?,
            }
        }
        other => {
            return Err(Error::Config(format!(
                "unknown algorithm `{other}`; expected cga, mscga, swcga or rmhc"
            )))
        }
    };

    let problem = match raw.problem.as_deref().unwrap_or("onemax") {
        "onemax" => ProblemSpec::NoisyOneMax {
            d,
            sigma2: raw.sigma2.unwrap_or(DEFAULT_SIGMA2),
        },
        "pmax" => {
            reject_key(raw.sigma2.is_some(), "sigma2", "problem `pmax`")?;
            ProblemSpec::PMax { d }
        }
        other => {
            return Err(Error::Config(format!(
                "unknown problem `{other}`; expected onemax or pmax"
            )))
        }
    };

    let config = ExperimentConfig {
        optimizer: OptimizerConfig {
            d,
            budget,
            algorithm,
        },
        problem,
        trials,
        master_seed,
    };
    config.validate()?;
    Ok(config)
}

/// The raw form of a resolved experiment, every field filled in. Used for
/// the manifest echo; `resolve(&to_raw(c))` reproduces `c`.
pub fn to_raw(config: &ExperimentConfig) -> RawExperiment {
    let (k, n, w, r) = match config.optimizer.algorithm {
        Algorithm::Cga { k } => (Some(k), None, None, None),
        Algorithm::MsCga { k, n } => (Some(k), Some(n), None, None),
        Algorithm::SwCga { k, w } => (Some(k), None, Some(w), None),
        Algorithm::Rmhc { r } => (None, None, None, Some(r)),
    };
    let sigma2 = match config.problem {
        ProblemSpec::NoisyOneMax { sigma2, .. } => Some(sigma2),
        ProblemSpec::PMax { .. } => None,
    };
    RawExperiment {
        algorithm: Some(config.optimizer.algorithm.name().to_owned()),
        problem: Some(config.problem.name().to_owned()),
        d: Some(config.optimizer.d),
        k: k.map(KSpec::Number),
        n,
        w,
        r,
        sigma2,
        budget: Some(config.optimizer.budget),
        trials: Some(config.trials),
        seed: Some(config.master_seed),
    }
}
