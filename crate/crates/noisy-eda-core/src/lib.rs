//! Compact genetic algorithm variants for noisy binary optimisation.
//!
//! The crate has three layers:
//!
//! - [`model`]: the per-bit probability vector and the primitive operations
//!   every variant is assembled from (sampling, competition, model update,
//!   recommendation, convergence testing);
//! - [`optimizers`]: four budget-aware loops behind one stepping contract
//!   with per-evaluation tracing: the standard two-sample cGA, the
//!   multiple-sample MScGA, the sliding-window SWcGA and a resampling
//!   random-mutation hill climber used as a baseline;
//! - [`problems`]: noisy OneMax (additive Gaussian noise) and PMax
//!   (Bernoulli win/loss outcomes).
//!
//! Everything here is `no_std` (with `alloc`). IO, parallel trial running
//! and file formats live in the companion `noisy-eda` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod model;
pub mod optimizers;
pub mod problems;

pub use error::{Error, Result};
pub use model::{compete, BitString, ProbabilityVector, ScoredSample};
pub use optimizers::{
    build_optimizer, rank_descend, run, theoretical_k, Algorithm, CgaOptimizer, MsCgaOptimizer,
    NoTrace, Optimizer, OptimizerConfig, RmhcOptimizer, RunResult, SlidingWindow, SwCgaOptimizer,
    TraceSink,
};
pub use problems::{noisy_onemax, pmax_outcome, pmax_win_probability, Problem, ProblemSpec};
