use rand::RngCore;

use super::{sample_scored, validate_k, EvalTracker, Optimizer, TraceSink};
use crate::error::{Error, Result};
use crate::model::{compete, BitString, ProbabilityVector};
use crate::problems::Problem;

/// The standard compact genetic algorithm: per iteration, draw two
/// candidates from the model, evaluate both, and move the model towards
/// whichever scored higher.
#[derive(Debug, Clone)]
pub struct CgaOptimizer {
    model: ProbabilityVector,
    k: f64,
    tracker: EvalTracker,
    comparisons: u64,
}

impl CgaOptimizer {
    pub fn new(d: usize, k: f64, budget: u64, optimum: BitString) -> Result<Self> {
        validate_k(k)?;
        if optimum.len() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                found: optimum.len(),
            });
        }
        Ok(Self {
            model: ProbabilityVector::uniform(d)?,
            k,
            tracker: EvalTracker::new(budget, optimum),
            comparisons: 0,
        })
    }
}

impl Optimizer for CgaOptimizer {
    fn step_cost(&self) -> u64 {
        2
    }

    fn is_converged(&self) -> bool {
        self.model.is_converged()
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

    fn recommendation(&self) -> BitString {
        self.model.recommend()
    }

    fn model(&self) -> Option<&ProbabilityVector> {
        Some(&self.model)
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
        self.tracker.guard(2)?;
        let first = sample_scored(&self.model, problem, rng, &mut self.tracker);
        trace.record(self.tracker.evals_used(), &self.model.recommend());
        let second = sample_scored(&self.model, problem, rng, &mut self.tracker);
        let (winner, loser) = compete(&first, &second)?;
        self.model.update(winner.bits(), loser.bits(), self.k)?;
        self.comparisons += 1;
        trace.record(self.tracker.evals_used(), &self.model.recommend());
        Ok(())
    }
}
