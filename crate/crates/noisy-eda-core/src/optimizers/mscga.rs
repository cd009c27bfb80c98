use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::RngCore;

use super::{sample_scored, validate_k, EvalTracker, Optimizer, TraceSink};
use crate::error::{Error, Result};
use crate::model::{BitString, ProbabilityVector, ScoredSample};
use crate::problems::Problem;

/// Sorts sample indices into non-increasing fitness order.
///
/// The sort is stable: equal fitnesses keep their draw order, so the
/// earlier sample ranks ahead.
pub fn rank_descend(fitnesses: &[f64]) -> Result<Vec<usize>> {
    if fitnesses.is_empty() {
        return Err(Error::EmptyRanking);
    }
    let mut order: Vec<usize> = (0..fitnesses.len()).collect();
    order.sort_by(|&a, &b| {
        fitnesses[b]
            .partial_cmp(&fitnesses[a])
            .unwrap_or(Ordering::Equal)
    });
    Ok(order)
}

/// Multiple-sample cGA: per iteration, draw `n` candidates, rank them by
/// observed fitness and apply one model update per ordered pair, better
/// sample as winner. That is `n(n-1)/2` updates per iteration; `n = 2`
/// reduces to the plain cGA.
#[derive(Debug, Clone)]
pub struct MsCgaOptimizer {
    model: ProbabilityVector,
    k: f64,
    n: usize,
    tracker: EvalTracker,
    comparisons: u64,
}

impl MsCgaOptimizer {
    pub fn new(d: usize, k: f64, n: usize, budget: u64, optimum: BitString) -> Result<Self> {
        validate_k(k)?;
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "must draw at least 2 samples per iteration",
            });
        }
        if optimum.len() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                found: optimum.len(),
            });
        }
        Ok(Self {
            model: ProbabilityVector::uniform(d)?,
            k,
            n,
            tracker: EvalTracker::new(budget, optimum),
            comparisons: 0,
        })
    }
}

impl Optimizer for MsCgaOptimizer {
    fn step_cost(&self) -> u64 {
        self.n as u64
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
        self.tracker.guard(self.n as u64)?;
        let mut samples: Vec<ScoredSample> = Vec::with_capacity(self.n);
        for drawn in 0..self.n {
            samples.push(sample_scored(&self.model, problem, rng, &mut self.tracker));
            if drawn + 1 < self.n {
                trace.record(self.tracker.evals_used(), &self.model.recommend());
            }
        }
        let fitnesses: Vec<f64> = samples.iter().map(ScoredSample::fitness).collect();
        let order = rank_descend(&fitnesses)?;
        for upper in 0..self.n - 1 {
            for lower in upper + 1..self.n {
                let winner = &samples[order[upper]];
                let loser = &samples[order[lower]];
                self.model.update(winner.bits(), loser.bits(), self.k)?;
                self.comparisons += 1;
            }
        }
        trace.record(self.tracker.evals_used(), &self.model.recommend());
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rank_descend_orders_by_fitness() {
        assert_eq!(rank_descend(&[5.0, 9.0, 7.0]).unwrap(), vec![1, 2, 0]);
        assert_eq!(rank_descend(&[3.0]).unwrap(), vec![0]);
        assert_eq!(
            rank_descend(&[1.0, 2.0, 3.0, 4.0]).unwrap(),
            vec![3, 2, 1, 0]
        );
    }

    #[test]
    fn rank_descend_keeps_draw_order_on_ties() {
        assert_eq!(rank_descend(&[4.0, 4.0, 4.0]).unwrap(), vec![0, 1, 2]);
        assert_eq!(
            rank_descend(&[2.0, 7.0, 2.0, 7.0]).unwrap(),
            vec![1, 3, 0, 2]
        );
    }

    #[test]
    fn rank_descend_rejects_empty_input() {
        assert_eq!(rank_descend(&[]).unwrap_err(), Error::EmptyRanking);
    }

    #[test]
    fn ranked_pair_visit_order_is_outer_then_inner() {
        // With fitnesses (5, 9, 7) the ranking is [1, 2, 0]; pair visits in
        // nested-loop order must be (1,2), (1,0), (2,0).
        let order = rank_descend(&[5.0, 9.0, 7.0]).unwrap();
        let mut pairs = vec![];
        for upper in 0..order.len() - 1 {
            for lower in upper + 1..order.len() {
                pairs.push((order[upper], order[lower]));
            }
        }
        assert_eq!(pairs, vec![(1, 2), (1, 0), (2, 0)]);
    }
}
