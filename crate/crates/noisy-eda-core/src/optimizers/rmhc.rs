use rand::{Rng, RngCore};

use super::{EvalTracker, Optimizer, TraceSink};
use crate::error::{Error, Result};
use crate::model::{BitString, ProbabilityVector};
use crate::problems::Problem;

#[derive(Debug, Clone)]
struct Incumbent {
    bits: BitString,
    /// Mean of the `r` noisy evaluations the candidate received when it was
    /// proposed. Stored once and reused in later comparisons.
    mean_fitness: f64,
}

/// Random-mutation hill climber with resampling, the non-model baseline.
///
/// The first step draws a uniform random string and spends `r` evaluations
/// establishing its mean fitness. Every later step flips one uniformly
/// chosen bit of the incumbent, evaluates the offspring `r` times, and
/// replaces the incumbent when the offspring's mean is at least as high.
/// The incumbent's stored mean is never refreshed.
#[derive(Debug, Clone)]
pub struct RmhcOptimizer {
    d: usize,
    r: u64,
    tracker: EvalTracker,
    incumbent: Option<Incumbent>,
    comparisons: u64,
}

impl RmhcOptimizer {
    pub fn new(d: usize, r: u64, budget: u64, optimum: BitString) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension { d, min: 1 });
        }
        if r < 1 {
            return Err(Error::InvalidParameter {
                name: "r",
                reason: "must evaluate each candidate at least once",
            });
        }
        if optimum.len() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                found: optimum.len(),
            });
        }
        Ok(Self {
            d,
            r,
            tracker: EvalTracker::new(budget, optimum),
            incumbent: None,
            comparisons: 0,
        })
    }
}

/// Evaluates `bits` a total of `r` times and returns the mean observation.
/// All but the final evaluation report `shown` as the anytime
/// recommendation; the final entry is the caller's to record once the
/// accept/reject decision is made.
fn mean_fitness(
    bits: &BitString,
    r: u64,
    shown: &BitString,
    problem: &dyn Problem,
    rng: &mut dyn RngCore,
    tracker: &mut EvalTracker,
    trace: &mut dyn TraceSink,
) -> f64 {
    let mut total = 0.0;
    for drawn in 0..r {
        total += problem.evaluate(bits, rng);
        tracker.observe(bits);
        if drawn + 1 < r {
            trace.record(tracker.evals_used(), shown);
        }
    }
    total / r as f64
}

impl Optimizer for RmhcOptimizer {
    fn step_cost(&self) -> u64 {
        self.r
    }

    fn is_converged(&self) -> bool {
        false
    }

    fn evals_used(&self) -> u64 {
        self.tracker.evals_used()
    }

    fn evals_remaining(&self) -> u64 {
        self.tracker.remaining()
    }

    fn comparisons_made(&self) -> u64 {
        self.comparisons
    }

    /// The incumbent, or the all-zero string before any evaluation.
    fn recommendation(&self) -> BitString {
        self.incumbent
            .as_ref()
            .map(|inc| inc.bits.clone())
            .unwrap_or_else(|| BitString::zeros(self.d))
    }

    fn model(&self) -> Option<&ProbabilityVector> {
        None
    }

    fn hit_optimum(&self) -> bool {
        self.tracker.hit_optimum()
    }

    fn step(
        &mut self,
        problem: &dyn Problem,
        rng: &mut dyn RngCore,
        trace: &mut dyn TraceSink,
    ) -> Result<()> {
        self.tracker.guard(self.r)?;
        match self.incumbent.take() {
            None => {
                let bits =
                    BitString::from_bits((0..self.d).map(|_| rng.random::<f64>() < 0.5).collect());
                let mean =
                    mean_fitness(&bits, self.r, &bits, problem, rng, &mut self.tracker, trace);
                trace.record(self.tracker.evals_used(), &bits);
                self.incumbent = Some(Incumbent {
                    bits,
                    mean_fitness: mean,
                });
            }
            Some(incumbent) => {
                let flip = rng.random_range(0..self.d);
                let offspring = incumbent.bits.flipped(flip);
                let mean = mean_fitness(
                    &offspring,
                    self.r,
                    &incumbent.bits,
                    problem,
                    rng,
                    &mut self.tracker,
                    trace,
                );
                self.comparisons += 1;
                let next = if mean >= incumbent.mean_fitness {
                    Incumbent {
                        bits: offspring,
                        mean_fitness: mean,
                    }
                } else {
                    incumbent
                };
                trace.record(self.tracker.evals_used(), &next.bits);
                self.incumbent = Some(next);
            }
        }
        Ok(())
    }
}
