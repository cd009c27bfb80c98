//! The probability-vector model and the primitive operations every variant
//! is assembled from.
//!
//! A [`ProbabilityVector`] holds one Bernoulli parameter per bit position.
//! Sampling draws candidate [`BitString`]s, [`compete`] picks a winner
//! between two scored candidates, and [`ProbabilityVector::update`] nudges
//! the model towards the winner by `1/k` per differing bit, where `k` plays
//! the role of a virtual population size.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// A candidate solution: a fixed-length binary string.
///
/// Position 0 is the first bit and, for problems that read the string as a
/// number, the most significant one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    /// Wraps raw bits.
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// The all-zero string of length `d`.
    pub fn zeros(d: usize) -> Self {
        Self {
            bits: vec![false; d],
        }
    }

    /// The all-one string of length `d`.
    pub fn ones(d: usize) -> Self {
        Self {
            bits: vec![true; d],
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Bit at position `i`. Panics when out of range.
    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// A copy with bit `i` flipped.
    pub fn flipped(&self, i: usize) -> Self {
        let mut bits = self.bits.clone();
        bits[i] = !bits[i];
        Self { bits }
    }

    /// Number of positions at which the two strings differ.
    ///
    /// Panics if the lengths differ.
    pub fn hamming_distance(&self, other: &Self) -> usize {
        assert_eq!(
            self.len(),
            other.len(),
            "hamming distance needs equal lengths"
        );
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// A candidate paired with the one noisy fitness observation it received.
///
/// The observation is recorded at construction and never refreshed:
/// re-evaluating would cost budget, so all algorithms reuse the stored
/// value when the sample is compared again later.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSample {
    bits: BitString,
    fitness: f64,
}

impl ScoredSample {
    pub fn new(bits: BitString, fitness: f64) -> Self {
        Self { bits, fitness }
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn fitness(&self) -> f64 {
        self.fitness
    }
}

/// Decides `(winner, loser)` between two scored samples.
///
/// The first sample wins only on strictly greater fitness; ties go to the
/// second. The asymmetry is deliberate and observable on problems with
/// discrete fitness values, so callers must pass arguments in the intended
/// order (e.g. the fresh sample first, the history entry second).
pub fn compete<'a>(
    a: &'a ScoredSample,
    b: &'a ScoredSample,
) -> Result<(&'a ScoredSample, &'a ScoredSample)> {
    if a.bits.len() != b.bits.len() {
        return Err(Error::LengthMismatch {
            expected: a.bits.len(),
            found: b.bits.len(),
        });
    }
    if a.fitness > b.fitness {
        Ok((a, b))
    } else {
        Ok((b, a))
    }
}

/// Per-bit Bernoulli model of a virtual population.
///
/// Every element stays inside `[0, 1]`; [`ProbabilityVector::update`]
/// clamps after each additive step, which is what lets the vector actually
/// reach the fully converged all-0/1 state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    /// The maximally uncertain model: every element exactly 0.5.
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension { d, min: 1 });
        }
        Ok(Self {
            probs: vec![0.5; d],
        })
    }

    /// Wraps raw probabilities. Fails if any element is outside `[0, 1]`
    /// or the vector is empty.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDimension { d: 0, min: 1 });
        }
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidParameter {
                name: "probs",
                reason: "every element must lie in [0, 1]",
            });
        }
        Ok(Self { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Draws one candidate: bit `i` is 1 when a fresh uniform draw from
    /// `[0, 1)` lands strictly below `probs[i]`.
    ///
    /// Consumes exactly one `f64` draw per position, in position order.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let bits = self
            .probs
            .iter()
            .map(|&p| rng.random::<f64>() < p)
            .collect();
        BitString::from_bits(bits)
    }

    /// The most likely string under the model: bit `i` is 1 iff `probs[i]`
    /// is strictly above 0.5. Costs no evaluations and no randomness.
    pub fn recommend(&self) -> BitString {
        BitString::from_bits(self.probs.iter().map(|&p| p > 0.5).collect())
    }

    /// True once every element sits exactly at 0 or 1, i.e. sampling can
    /// only ever return one string.
    pub fn is_converged(&self) -> bool {
        self.probs.iter().all(|&p| p == 0.0 || p == 1.0)
    }

    /// Moves the model towards `winner` and away from `loser`.
    ///
    /// Wherever the two strings disagree the element moves by `1/k`,
    /// upwards if the winning bit is 1 and downwards otherwise, then is
    /// clamped into `[0, 1]`. Agreeing positions are left untouched.
    pub fn update(&mut self, winner: &BitString, loser: &BitString, k: f64) -> Result<()> {
        if winner.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: winner.len(),
            });
        }
        if loser.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: loser.len(),
            });
        }
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: "must be a positive finite real",
            });
        }
        let step = 1.0 / k;
        for (i, p) in self.probs.iter_mut().enumerate() {
            let win_bit = winner.get(i);
            if win_bit != loser.get(i) {
                let moved = if win_bit { *p + step } else { *p - step };
                *p = moved.clamp(0.0, 1.0);
            }
        }
        Ok(())
    }
}
