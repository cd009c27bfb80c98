//! Noisy benchmark problems: OneMax under additive Gaussian noise, and
//! PMax, where each evaluation is a Bernoulli win/loss outcome.

use rand::{Rng, RngCore};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::model::BitString;

/// A binary maximisation problem observed through noise.
///
/// [`Problem::evaluate`] returns one noisy observation and draws fresh noise
/// on every call. [`Problem::true_fitness`] is the noise-free ground truth;
/// it exists for reporting and is never consulted by the optimisers.
pub trait Problem {
    fn dimension(&self) -> usize;

    /// One noisy fitness observation of `x`.
    fn evaluate(&self, x: &BitString, rng: &mut dyn RngCore) -> f64;

    /// Noise-free fitness of `x`.
    fn true_fitness(&self, x: &BitString) -> f64;

    /// The known optimal string.
    fn optimum(&self) -> BitString;
}

/// The stock benchmark problems.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    /// Maximise the number of 1-bits, observed through additive
    /// `N(0, sigma2)` noise. `sigma2 = 0` gives the noise-free problem.
    NoisyOneMax { d: usize, sigma2: f64 },
    /// Read the string as a `d`-bit binary number (bit 0 most significant);
    /// each evaluation is a win (1.0) with probability `value / (2^d - 1)`,
    /// otherwise a loss (0.0).
    PMax { d: usize },
}

impl ProblemSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemSpec::NoisyOneMax { .. } => "onemax",
            ProblemSpec::PMax { .. } => "pmax",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ProblemSpec::NoisyOneMax { d, sigma2 } => {
                if d == 0 {
                    return Err(Error::InvalidDimension { d, min: 1 });
                }
                if !sigma2.is_finite() || sigma2 < 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "sigma2",
                        reason: "must be a finite non-negative real",
                    });
                }
                Ok(())
            }
            ProblemSpec::PMax { d } => {
                if d == 0 {
                    return Err(Error::InvalidDimension { d, min: 1 });
                }
                Ok(())
            }
        }
    }
}

impl Problem for ProblemSpec {
    fn dimension(&self) -> usize {
        match *self {
            ProblemSpec::NoisyOneMax { d, .. } | ProblemSpec::PMax { d } => d,
        }
    }

    fn evaluate(&self, x: &BitString, rng: &mut dyn RngCore) -> f64 {
        match *self {
            ProblemSpec::NoisyOneMax { sigma2, .. } => noisy_onemax(x, sigma2, rng),
            ProblemSpec::PMax { .. } => pmax_outcome(x, rng),
        }
    }

    fn true_fitness(&self, x: &BitString) -> f64 {
        match self {
            ProblemSpec::NoisyOneMax { .. } => x.count_ones() as f64,
            ProblemSpec::PMax { .. } => pmax_win_probability(x),
        }
    }

    fn optimum(&self) -> BitString {
        BitString::ones(self.dimension())
    }
}

/// One noisy OneMax observation: the 1-bit count plus a fresh
/// `N(0, sigma2)` draw.
///
/// The Gaussian draw happens even when `sigma2` is zero, so the random
/// stream consumed per evaluation does not depend on the noise level.
pub fn noisy_onemax<R: Rng + ?Sized>(x: &BitString, sigma2: f64, rng: &mut R) -> f64 {
    let noise: f64 = StandardNormal.sample(rng);
    x.count_ones() as f64 + libm::sqrt(sigma2) * noise
}

/// Win probability of a PMax candidate: its numeric value (bit 0 most
/// significant) divided by the maximal value `2^d - 1`.
///
/// Numerator and denominator are accumulated in double precision, so for
/// `d` beyond 53 bits the quotient carries a relative error of about one
/// ulp, far below the Bernoulli sampling noise it feeds.
pub fn pmax_win_probability(x: &BitString) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let mut value = 0.0_f64;
    let mut max_value = 0.0_f64;
    for &bit in x.bits() {
        value = value * 2.0 + if bit { 1.0 } else { 0.0 };
        max_value = max_value * 2.0 + 1.0;
    }
    value / max_value
}

/// One PMax outcome: 1.0 with the candidate's win probability, else 0.0.
pub fn pmax_outcome<R: Rng + ?Sized>(x: &BitString, rng: &mut R) -> f64 {
    if rng.random::<f64>() < pmax_win_probability(x) {
        1.0
    } else {
        0.0
    }
}
