use rand::RngCore;

use super::{sample_scored, validate_k, EvalTracker, Optimizer, SlidingWindow, TraceSink};
use crate::error::{Error, Result};
use crate::model::{compete, BitString, ProbabilityVector};
use crate::problems::Problem;

/// Sliding-window cGA: per iteration, draw and evaluate one candidate,
/// then play it against every entry of a FIFO window of recent samples
/// (oldest first), applying one model update per pairing. The fresh sample
/// enters the window afterwards, evicting the oldest entry once the window
/// is full.
///
/// Ties go to the window entry, since the fresh sample is passed as the
/// first competitor.
#[derive(Debug, Clone)]
pub struct SwCgaOptimizer {
    model: ProbabilityVector,
    k: f64,
    window: SlidingWindow,
    tracker: EvalTracker,
    comparisons: u64,
}

impl SwCgaOptimizer {
    pub fn new(d: usize, k: f64, w: usize, budget: u64, optimum: BitString) -> Result<Self> {
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
            window: SlidingWindow::new(w)?,
            tracker: EvalTracker::new(budget, optimum),
            comparisons: 0,
        })
    }

    /// Read-only view of the history window.
    pub fn window(&self) -> &SlidingWindow {
        &self.window
    }
}

impl Optimizer for SwCgaOptimizer {
    fn step_cost(&self) -> u64 {
        1
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
        self.tracker.guard(1)?;
        let sample = sample_scored(&self.model, problem, rng, &mut self.tracker);
        for entry in self.window.iter() {
            let (winner, loser) = compete(&sample, entry)?;
            self.model.update(winner.bits(), loser.bits(), self.k)?;
            self.comparisons += 1;
        }
        self.window.push(sample);
        trace.record(self.tracker.evals_used(), &self.model.recommend());
        Ok(())
    }
}
