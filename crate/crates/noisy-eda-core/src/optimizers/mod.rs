//! Budget-aware optimisation loops behind one stepping contract.
//!
//! Four algorithms implement [`Optimizer`]: the standard two-sample cGA,
//! the multiple-sample [`MsCgaOptimizer`], the sliding-window
//! [`SwCgaOptimizer`] and a resampling random-mutation hill climber used as
//! a baseline. Every `step` consumes a fixed number of fitness evaluations
//! and reports one trace entry per evaluation, so anytime behaviour stays
//! comparable across algorithms with different per-iteration costs.

mod cga;
mod mscga;
mod rmhc;
mod swcga;
mod window;

pub use cga::CgaOptimizer;
pub use mscga::{rank_descend, MsCgaOptimizer};
pub use rmhc::RmhcOptimizer;
pub use swcga::SwCgaOptimizer;
pub use window::SlidingWindow;

use alloc::boxed::Box;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::model::{BitString, ProbabilityVector, ScoredSample};
use crate::problems::Problem;

/// Which loop to run, with its loop-specific parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    /// Two samples per iteration, one comparison, one update.
    Cga { k: f64 },
    /// `n` samples per iteration and all `n(n-1)/2` ranked pairwise updates.
    MsCga { k: f64, n: usize },
    /// One sample per iteration, compared against a FIFO window of width `w`.
    SwCga { k: f64, w: usize },
    /// Single-bit-flip hill climber; each candidate's fitness is the mean
    /// of `r` noisy evaluations.
    Rmhc { r: u64 },
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Cga { .. } => "cga",
            Algorithm::MsCga { .. } => "mscga",
            Algorithm::SwCga { .. } => "swcga",
            Algorithm::Rmhc { .. } => "rmhc",
        }
    }

    /// Virtual population size, for the model-based variants.
    pub fn k(&self) -> Option<f64> {
        match *self {
            Algorithm::Cga { k } | Algorithm::MsCga { k, .. } | Algorithm::SwCga { k, .. } => {
                Some(k)
            }
            Algorithm::Rmhc { .. } => None,
        }
    }

    /// The variant-defining parameter: `n`, `w` or `r`. The plain cGA is
    /// the two-sample case, so it reports 2.
    pub fn param(&self) -> u64 {
        match *self {
            Algorithm::Cga { .. } => 2,
            Algorithm::MsCga { n, .. } => n as u64,
            Algorithm::SwCga { w, .. } => w as u64,
            Algorithm::Rmhc { r } => r,
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(k) = self.k() {
            validate_k(k)?;
        }
        match *self {
            Algorithm::MsCga { n, .. } if n < 2 => Err(Error::InvalidParameter {
                name: "n",
                reason: "must draw at least 2 samples per iteration",
            }),
            Algorithm::SwCga { w, .. } if w < 1 => Err(Error::InvalidParameter {
                name: "w",
                reason: "window width must be at least 1",
            }),
            Algorithm::Rmhc { r } if r < 1 => Err(Error::InvalidParameter {
                name: "r",
                reason: "must evaluate each candidate at least once",
            }),
            _ => Ok(()),
        }
    }
}

pub(crate) fn validate_k(k: f64) -> Result<()> {
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: "must be a positive finite real",
        });
    }
    Ok(())
}

/// Dimension, evaluation budget and algorithm choice for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub d: usize,
    pub budget: u64,
    pub algorithm: Algorithm,
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidDimension { d: 0, min: 1 });
        }
        if self.budget == 0 {
            return Err(Error::InvalidParameter {
                name: "budget",
                reason: "must allow at least one evaluation",
            });
        }
        self.algorithm.validate()
    }
}

/// Receives one entry per fitness evaluation: how many evaluations have
/// been consumed and what the optimiser would recommend if stopped there.
///
/// The entry for an iteration's final evaluation is recorded after that
/// iteration's model updates, so every prefix of the trace reflects the
/// true anytime recommendation.
pub trait TraceSink {
    fn record(&mut self, evals_used: u64, recommendation: &BitString);
}

/// Discards all trace entries.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoTrace;

impl TraceSink for NoTrace {
    fn record(&mut self, _evals_used: u64, _recommendation: &BitString) {}
}

/// The stepping contract shared by all loops.
pub trait Optimizer {
    /// Fitness evaluations the next step will consume.
    fn step_cost(&self) -> u64;

    /// True once the model cannot change any further. Always false for the
    /// hill climber, which has no notion of convergence.
    fn is_converged(&self) -> bool;

    fn evals_used(&self) -> u64;

    fn evals_remaining(&self) -> u64;

    /// Win/loss comparisons performed so far.
    fn comparisons_made(&self) -> u64;

    /// The anytime recommendation; costs no evaluations.
    fn recommendation(&self) -> BitString;

    /// The probability-vector model, for the variants that keep one.
    fn model(&self) -> Option<&ProbabilityVector>;

    /// Whether the problem optimum has been sampled and evaluated.
    fn hit_optimum(&self) -> bool;

    /// Runs one iteration. Fails with [`Error::BudgetExhausted`] when the
    /// remaining budget cannot pay for it; no evaluations are consumed in
    /// that case.
    fn step(
        &mut self,
        problem: &dyn Problem,
        rng: &mut dyn RngCore,
        trace: &mut dyn TraceSink,
    ) -> Result<()>;
}

/// Budget and evaluation book-keeping shared by the loops, including
/// optimum-hit detection.
#[derive(Debug, Clone)]
pub(crate) struct EvalTracker {
    budget: u64,
    evals_used: u64,
    optimum: BitString,
    hit_optimum: bool,
}

impl EvalTracker {
    pub(crate) fn new(budget: u64, optimum: BitString) -> Self {
        Self {
            budget,
            evals_used: 0,
            optimum,
            hit_optimum: false,
        }
    }

    pub(crate) fn evals_used(&self) -> u64 {
        self.evals_used
    }

    pub(crate) fn remaining(&self) -> u64 {
        self.budget - self.evals_used
    }

    pub(crate) fn hit_optimum(&self) -> bool {
        self.hit_optimum
    }

    /// Accounts for one evaluation of `bits`.
    pub(crate) fn observe(&mut self, bits: &BitString) {
        self.evals_used += 1;
        if !self.hit_optimum && bits == &self.optimum {
            self.hit_optimum = true;
        }
    }

    pub(crate) fn guard(&self, required: u64) -> Result<()> {
        if self.remaining() < required {
            return Err(Error::BudgetExhausted {
                remaining: self.remaining(),
                required,
            });
        }
        Ok(())
    }
}

/// Draws one candidate from the model and scores it with one evaluation.
pub(crate) fn sample_scored(
    model: &ProbabilityVector,
    problem: &dyn Problem,
    rng: &mut dyn RngCore,
    tracker: &mut EvalTracker,
) -> ScoredSample {
    let bits = model.sample(rng);
    let fitness = problem.evaluate(&bits, rng);
    tracker.observe(&bits);
    ScoredSample::new(bits, fitness)
}

/// Builds a fresh optimiser for `config`. `optimum` is the problem's known
/// best string, used only for hit detection.
pub fn build_optimizer(config: &OptimizerConfig, optimum: BitString) -> Result<Box<dyn Optimizer>> {
    config.validate()?;
    if optimum.len() != config.d {
        return Err(Error::LengthMismatch {
            expected: config.d,
            found: optimum.len(),
        });
    }
    Ok(match config.algorithm {
        Algorithm::Cga { k } => Box::new(CgaOptimizer::new(config.d, k, config.budget, optimum)?),
        Algorithm::MsCga { k, n } => {
            Box::new(MsCgaOptimizer::new(config.d, k, n, config.budget, optimum)?)
        }
        Algorithm::SwCga { k, w } => {
            Box::new(SwCgaOptimizer::new(config.d, k, w, config.budget, optimum)?)
        }
        Algorithm::Rmhc { r } => Box::new(RmhcOptimizer::new(config.d, r, config.budget, optimum)?),
    })
}

/// Everything a finished run reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub recommendation: BitString,
    /// Final probability vector; absent for the hill climber.
    pub model: Option<ProbabilityVector>,
    pub evals_used: u64,
    pub comparisons_made: u64,
    /// Whether the optimum string was drawn and evaluated at least once.
    pub hit_optimum: bool,
}

/// Drives `config`'s algorithm against `problem` until the model converges
/// or the next iteration no longer fits into the budget, whichever comes
/// first. Leftover budget smaller than one iteration is simply not spent.
pub fn run(
    config: &OptimizerConfig,
    problem: &dyn Problem,
    rng: &mut dyn RngCore,
    trace: &mut dyn TraceSink,
) -> Result<RunResult> {
    if problem.dimension() != config.d {
        return Err(Error::LengthMismatch {
            expected: config.d,
            found: problem.dimension(),
        });
    }
    let mut optimizer = build_optimizer(config, problem.optimum())?;
    while !optimizer.is_converged() && optimizer.evals_remaining() >= optimizer.step_cost() {
        optimizer.step(problem, rng, trace)?;
    }
    Ok(RunResult {
        recommendation: optimizer.recommendation(),
        model: optimizer.model().cloned(),
        evals_used: optimizer.evals_used(),
        comparisons_made: optimizer.comparisons_made(),
        hit_optimum: optimizer.hit_optimum(),
    })
}

/// Reference virtual population size for noisy OneMax with Gaussian noise
/// of variance `sigma2`: `7 * sigma2 * sqrt(d) * ln(d)^2`.
///
/// At `d = 100`, `sigma2 = 1` this comes to roughly `15 d`.
pub fn theoretical_k(d: usize, sigma2: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension { d, min: 2 });
    }
    if !sigma2.is_finite() || sigma2 <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "sigma2",
            reason: "must be a positive finite real",
        });
    }
    let dims = d as f64;
    let ln_d = libm::log(dims);
    Ok(7.0 * sigma2 * libm::sqrt(dims) * ln_d * ln_d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theoretical_k_matches_closed_form() {
        let k = theoretical_k(100, 1.0).unwrap();
        let expected = 7.0 * 10.0 * libm::log(100.0) * libm::log(100.0);
        assert_eq!(k, expected);
        assert!((k - 1484.53).abs() < 0.01);
        // Comfortably close to 15 d at d = 100.
        assert!((k / 100.0 - 15.0).abs() < 0.2);
    }

    #[test]
    fn theoretical_k_scales_linearly_in_sigma2() {
        let base = theoretical_k(64, 1.0).unwrap();
        assert_eq!(theoretical_k(64, 3.0).unwrap(), 3.0 * base);
    }

    #[test]
    fn theoretical_k_rejects_degenerate_inputs() {
        assert!(matches!(
            theoretical_k(1, 1.0),
            Err(Error::InvalidDimension { d: 1, min: 2 })
        ));
        assert!(matches!(
            theoretical_k(0, 1.0),
            Err(Error::InvalidDimension { .. })
        ));
        assert!(matches!(
            theoretical_k(100, 0.0),
            Err(Error::InvalidParameter { name: "sigma2", .. })
        ));
        assert!(matches!(
            theoretical_k(100, f64::NAN),
            Err(Error::InvalidParameter { name: "sigma2", .. })
        ));
    }

    #[test]
    fn algorithm_metadata() {
        assert_eq!(Algorithm::Cga { k: 50.0 }.name(), "cga");
        assert_eq!(Algorithm::Cga { k: 50.0 }.param(), 2);
        assert_eq!(Algorithm::MsCga { k: 500.0, n: 20 }.param(), 20);
        assert_eq!(Algorithm::SwCga { k: 500.0, w: 10 }.param(), 10);
        assert_eq!(Algorithm::Rmhc { r: 5 }.param(), 5);
        assert_eq!(Algorithm::Rmhc { r: 5 }.k(), None);
        assert_eq!(Algorithm::SwCga { k: 500.0, w: 10 }.k(), Some(500.0));
    }

    #[test]
    fn config_validation_catches_bad_parameters() {
        let ok = OptimizerConfig {
            d: 10,
            budget: 100,
            algorithm: Algorithm::Cga { k: 5.0 },
        };
        assert!(ok.validate().is_ok());

        let cases = [
            OptimizerConfig { d: 0, ..ok.clone() },
            OptimizerConfig {
                budget: 0,
                ..ok.clone()
            },
            OptimizerConfig {
                algorithm: Algorithm::Cga { k: 0.0 },
                ..ok.clone()
            },
            OptimizerConfig {
                algorithm: Algorithm::MsCga { k: 5.0, n: 1 },
                ..ok.clone()
            },
            OptimizerConfig {
                algorithm: Algorithm::SwCga { k: 5.0, w: 0 },
                ..ok.clone()
            },
            OptimizerConfig {
                algorithm: Algorithm::Rmhc { r: 0 },
                ..ok.clone()
            },
        ];
        for bad in cases {
            assert!(bad.validate().is_err(), "{bad:?} should not validate");
        }
    }
}
