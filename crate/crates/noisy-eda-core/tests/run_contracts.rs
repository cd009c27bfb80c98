//! Contract tests for the optimisation loops: evaluation accounting,
//! trace shape, tie semantics, determinism and budget handling.

use std::cell::{Cell, RefCell};

use noisy_eda_core::{
    run, Algorithm, BitString, Error, Optimizer, OptimizerConfig, Problem, ProblemSpec, RunResult,
    SwCgaOptimizer, TraceSink,
};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Default)]
struct VecSink(Vec<(u64, BitString)>);

impl TraceSink for VecSink {
    fn record(&mut self, evals_used: u64, recommendation: &BitString) {
        self.0.push((evals_used, recommendation.clone()));
    }
}

/// Problem whose evaluations come from a fixed script, independent of the
/// candidate. Panics when the script is exhausted, so tests also pin down
/// exactly how many evaluations a run performs.
struct ScriptedProblem {
    d: usize,
    script: Vec<f64>,
    next: Cell<usize>,
}

impl ScriptedProblem {
    fn new(d: usize, script: Vec<f64>) -> Self {
        Self {
            d,
            script,
            next: Cell::new(0),
        }
    }

    fn consumed(&self) -> usize {
        self.next.get()
    }
}

impl Problem for ScriptedProblem {
    fn dimension(&self) -> usize {
        self.d
    }

    fn evaluate(&self, _x: &BitString, _rng: &mut dyn RngCore) -> f64 {
        let i = self.next.get();
        self.next.set(i + 1);
        self.script[i]
    }

    fn true_fitness(&self, _x: &BitString) -> f64 {
        0.0
    }

    fn optimum(&self) -> BitString {
        BitString::ones(self.d)
    }
}

/// Wraps a real problem and logs every evaluated candidate.
struct RecordingProblem {
    inner: ProblemSpec,
    log: RefCell<Vec<BitString>>,
}

impl RecordingProblem {
    fn new(inner: ProblemSpec) -> Self {
        Self {
            inner,
            log: RefCell::new(Vec::new()),
        }
    }
}

impl Problem for RecordingProblem {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn evaluate(&self, x: &BitString, rng: &mut dyn RngCore) -> f64 {
        self.log.borrow_mut().push(x.clone());
        self.inner.evaluate(x, rng)
    }

    fn true_fitness(&self, x: &BitString) -> f64 {
        self.inner.true_fitness(x)
    }

    fn optimum(&self) -> BitString {
        self.inner.optimum()
    }
}

fn onemax(d: usize, sigma2: f64) -> ProblemSpec {
    ProblemSpec::NoisyOneMax { d, sigma2 }
}

fn config(d: usize, budget: u64, algorithm: Algorithm) -> OptimizerConfig {
    OptimizerConfig {
        d,
        budget,
        algorithm,
    }
}

fn run_traced(cfg: &OptimizerConfig, problem: &dyn Problem, seed: u64) -> (RunResult, VecSink) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sink = VecSink::default();
    let result = run(cfg, problem, &mut rng, &mut sink).unwrap();
    (result, sink)
}

// A k far above the budget keeps the model from converging, so evaluation
// counts depend on the budget alone.
const HUGE_K: f64 = 1e9;

#[test]
fn cga_performs_one_update_per_two_evaluations() {
    let cfg = config(16, 201, Algorithm::Cga { k: HUGE_K });
    let (result, _) = run_traced(&cfg, &onemax(16, 1.0), 3);
    assert_eq!(result.evals_used, 200);
    assert_eq!(result.comparisons_made, 100);
}

#[test]
fn mscga_performs_all_pairwise_updates_each_iteration() {
    let cfg = config(16, 503, Algorithm::MsCga { k: HUGE_K, n: 5 });
    let (result, _) = run_traced(&cfg, &onemax(16, 1.0), 4);
    assert_eq!(result.evals_used, 500);
    // 100 iterations, 5 * 4 / 2 ranked pairs each.
    assert_eq!(result.comparisons_made, 1000);
}

#[test]
fn swcga_update_count_follows_window_fill() {
    // Warm-up: the i-th evaluation faces i - 1 window entries; afterwards
    // exactly w updates per evaluation.
    let cfg = config(16, 100, Algorithm::SwCga { k: HUGE_K, w: 10 });
    let (result, _) = run_traced(&cfg, &onemax(16, 1.0), 5);
    assert_eq!(result.evals_used, 100);
    assert_eq!(result.comparisons_made, 45 + 90 * 10);

    // Budget below the window width: the window never fills.
    let cfg = config(16, 30, Algorithm::SwCga { k: HUGE_K, w: 50 });
    let (result, _) = run_traced(&cfg, &onemax(16, 1.0), 5);
    assert_eq!(result.comparisons_made, (0..30).sum::<u64>());
}

#[test]
fn mscga_with_two_samples_reproduces_cga_exactly() {
    // With continuous Gaussian noise, fitness ties have probability zero,
    // so the two-sample MScGA consumes the identical random stream and
    // makes the identical decisions as the plain cGA.
    let problem = onemax(30, 1.0);
    let cga_cfg = config(30, 400, Algorithm::Cga { k: 60.0 });
    let ms_cfg = config(30, 400, Algorithm::MsCga { k: 60.0, n: 2 });
    for seed in [7, 8, 9] {
        let (cga_result, cga_trace) = run_traced(&cga_cfg, &problem, seed);
        let (ms_result, ms_trace) = run_traced(&ms_cfg, &problem, seed);
        assert_eq!(cga_result, ms_result, "seed {seed}");
        assert_eq!(cga_trace.0, ms_trace.0, "seed {seed}");
    }
}

fn all_algorithms() -> Vec<Algorithm> {
    vec![
        Algorithm::Cga { k: 50.0 },
        Algorithm::MsCga { k: 500.0, n: 20 },
        Algorithm::SwCga { k: 500.0, w: 10 },
        Algorithm::Rmhc { r: 5 },
    ]
}

#[test]
fn identical_seeds_reproduce_identical_runs() {
    let problem = onemax(25, 1.0);
    for algorithm in all_algorithms() {
        let cfg = config(25, 300, algorithm);
        let (first, first_trace) = run_traced(&cfg, &problem, 11);
        let (second, second_trace) = run_traced(&cfg, &problem, 11);
        assert_eq!(first, second, "{:?}", cfg.algorithm);
        assert_eq!(first_trace.0, second_trace.0, "{:?}", cfg.algorithm);

        let (other, other_trace) = run_traced(&cfg, &problem, 12);
        let _ = other;
        assert_ne!(first_trace.0, other_trace.0, "{:?}", cfg.algorithm);
    }
}

#[test]
fn every_evaluation_emits_exactly_one_trace_entry() {
    let problem = onemax(12, 1.0);
    for algorithm in all_algorithms() {
        let cfg = config(12, 97, algorithm);
        let (result, trace) = run_traced(&cfg, &problem, 21);
        let indices: Vec<u64> = trace.0.iter().map(|(e, _)| *e).collect();
        let expected: Vec<u64> = (1..=result.evals_used).collect();
        assert_eq!(indices, expected, "{:?}", cfg.algorithm);
    }
}

#[test]
fn final_trace_entry_matches_run_result() {
    let problem = onemax(12, 1.0);
    for algorithm in all_algorithms() {
        let cfg = config(12, 97, algorithm);
        let (result, trace) = run_traced(&cfg, &problem, 33);
        let (last_eval, last_rec) = trace.0.last().unwrap();
        assert_eq!(*last_eval, result.evals_used);
        assert_eq!(last_rec, &result.recommendation, "{:?}", cfg.algorithm);
    }
}

#[test]
fn mid_iteration_trace_entries_hold_the_previous_recommendation() {
    // Entries for all but the last evaluation of an iteration must show the
    // recommendation as it stood before the iteration's updates.
    let problem = onemax(10, 1.0);
    for (algorithm, cost) in [
        (Algorithm::Cga { k: 8.0 }, 2),
        (Algorithm::MsCga { k: 8.0, n: 5 }, 5),
    ] {
        let cfg = config(10, 60, algorithm);
        let (_, trace) = run_traced(&cfg, &problem, 17);
        let uniform_rec = BitString::zeros(10);
        for (block, chunk) in trace.0.chunks(cost).enumerate() {
            let baseline = if block == 0 {
                &uniform_rec
            } else {
                &trace.0[block * cost - 1].1
            };
            for (_, rec) in &chunk[..chunk.len() - 1] {
                assert_eq!(rec, baseline, "{:?} block {block}", cfg.algorithm);
            }
        }
    }

    // The hill climber shows the incumbent while an offspring is still
    // being resampled; during the very first block there is no incumbent
    // yet, so all entries show the initial candidate.
    let cfg = config(10, 60, Algorithm::Rmhc { r: 4 });
    let (_, trace) = run_traced(&cfg, &problem, 17);
    for (block, chunk) in trace.0.chunks(4).enumerate() {
        if block == 0 {
            for (_, rec) in chunk {
                assert_eq!(rec, &chunk[0].1);
            }
        } else {
            let previous = &trace.0[block * 4 - 1].1;
            for (_, rec) in &chunk[..chunk.len() - 1] {
                assert_eq!(rec, previous, "block {block}");
            }
        }
    }
}

#[test]
fn budget_below_one_iteration_runs_nothing() {
    let cfg = config(10, 19, Algorithm::MsCga { k: 100.0, n: 20 });
    let (result, trace) = run_traced(&cfg, &onemax(10, 1.0), 2);
    assert_eq!(result.evals_used, 0);
    assert!(trace.0.is_empty());
    // The uniform model recommends all zeros under the strict threshold.
    assert_eq!(result.recommendation, BitString::zeros(10));
    assert_eq!(result.model.unwrap().probs(), &[0.5; 10]);
}

#[test]
fn converged_model_stops_the_run_early() {
    // k = 1 moves every differing position straight to a bound, so the
    // noise-free problem converges long before the budget runs out.
    let cfg = config(4, 10_000, Algorithm::Cga { k: 1.0 });
    let (result, _) = run_traced(&cfg, &onemax(4, 0.0), 13);
    assert!(result.model.unwrap().is_converged());
    assert!(result.evals_used < 10_000);
}

#[test]
fn run_rejects_dimension_mismatch() {
    let cfg = config(5, 100, Algorithm::Cga { k: 10.0 });
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let err = run(&cfg, &onemax(4, 1.0), &mut rng, &mut VecSink::default()).unwrap_err();
    assert_eq!(
        err,
        Error::LengthMismatch {
            expected: 5,
            found: 4
        }
    );
}

#[test]
fn stepping_beyond_the_budget_fails_without_spending() {
    let problem = onemax(6, 1.0);
    let mut optimizer = noisy_eda_core::build_optimizer(
        &config(6, 3, Algorithm::Cga { k: 10.0 }),
        problem.optimum(),
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut sink = VecSink::default();
    optimizer.step(&problem, &mut rng, &mut sink).unwrap();
    assert_eq!(optimizer.evals_used(), 2);
    let err = optimizer.step(&problem, &mut rng, &mut sink).unwrap_err();
    assert_eq!(
        err,
        Error::BudgetExhausted {
            remaining: 1,
            required: 2
        }
    );
    assert_eq!(optimizer.evals_used(), 2);
    assert_eq!(sink.0.len(), 2);
}

#[test]
fn rmhc_accepts_equal_means_and_rejects_worse() {
    let problem = ScriptedProblem::new(
        8,
        vec![
            4.0, 4.0, // initial candidate, mean 4
            4.0, 4.0, // offspring mean 4: tie, accepted
            3.0, 5.0, // offspring mean 4: tie again, accepted
            1.0, 2.0, // offspring mean 1.5: rejected
        ],
    );
    let cfg = config(8, 8, Algorithm::Rmhc { r: 2 });
    let (result, trace) = run_traced(&cfg, &problem, 6);
    assert_eq!(problem.consumed(), 8);
    assert_eq!(result.evals_used, 8);

    let rec_after = |step: usize| &trace.0[step * 2 - 1].1;
    let initial = rec_after(1);
    let second = rec_after(2);
    let third = rec_after(3);
    let fourth = rec_after(4);
    assert_eq!(initial.hamming_distance(second), 1, "tie must be accepted");
    assert_eq!(second.hamming_distance(third), 1, "tie must be accepted");
    assert_eq!(third, fourth, "worse offspring must be rejected");
    assert_eq!(&result.recommendation, fourth);
    assert!(result.model.is_none());
}

#[test]
fn rmhc_compares_means_over_all_r_observations() {
    let problem = ScriptedProblem::new(
        8,
        vec![
            0.0, 0.0, 0.0, // initial candidate, mean 0
            10.0, -10.0, 3.0, // offspring mean 1: accepted
            2.0, 2.0, -10.0, // offspring mean -2: rejected
        ],
    );
    let cfg = config(8, 9, Algorithm::Rmhc { r: 3 });
    let (result, trace) = run_traced(&cfg, &problem, 14);
    assert_eq!(result.evals_used, 9);
    let rec_after = |step: usize| &trace.0[step * 3 - 1].1;
    assert_eq!(rec_after(1).hamming_distance(rec_after(2)), 1);
    assert_eq!(rec_after(2), rec_after(3));
}

#[test]
fn hit_optimum_reflects_the_evaluated_candidates() {
    for algorithm in all_algorithms() {
        let problem = RecordingProblem::new(onemax(4, 1.0));
        let cfg = config(4, 120, algorithm);
        let (result, _) = run_traced(&cfg, &problem, 19);
        let optimum = BitString::ones(4);
        let sampled = problem.log.borrow().iter().any(|x| x == &optimum);
        assert_eq!(result.hit_optimum, sampled, "{:?}", cfg.algorithm);
    }
}

#[test]
fn never_stepping_never_hits_the_optimum() {
    let cfg = config(4, 1, Algorithm::Cga { k: 10.0 });
    let (result, _) = run_traced(&cfg, &onemax(4, 1.0), 19);
    assert_eq!(result.evals_used, 0);
    assert!(!result.hit_optimum);
}

/// Replays the sampling draws of a run where evaluations consume no
/// randomness: one uniform draw per bit, in order.
fn replay_bits(seed: u64, draws: usize) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..draws).map(|_| rng.random::<f64>() < 0.5).collect()
}

#[test]
fn swcga_window_tie_prefers_the_older_sample() {
    // Constant fitness makes every pairing a tie, which the window entry
    // must win. With d = 1 and k = 2 the model jumps straight to the first
    // sample's bit.
    let seed = (0..)
        .find(|&s| {
            let b = replay_bits(s, 2);
            b[0] != b[1]
        })
        .unwrap();
    let b = replay_bits(seed, 2);
    let problem = ScriptedProblem::new(1, vec![1.0, 1.0]);
    let cfg = config(1, 2, Algorithm::SwCga { k: 2.0, w: 1 });
    let (result, _) = run_traced(&cfg, &problem, seed);
    let expected = if b[0] { 1.0 } else { 0.0 };
    assert_eq!(result.model.unwrap().probs(), &[expected]);
}

#[test]
fn mscga_rank_tie_prefers_the_earlier_sample() {
    // Ranking is stable, so on equal fitness the first draw wins; the
    // plain cGA's pairwise tie rule awards the second draw instead. The
    // two variants only coincide when ties are absent.
    let seed = (0..)
        .find(|&s| {
            let b = replay_bits(s, 2);
            b[0] != b[1]
        })
        .unwrap();
    let b = replay_bits(seed, 2);

    let ms_problem = ScriptedProblem::new(1, vec![1.0, 1.0]);
    let ms_cfg = config(1, 2, Algorithm::MsCga { k: 2.0, n: 2 });
    let (ms_result, _) = run_traced(&ms_cfg, &ms_problem, seed);
    let toward_first = if b[0] { 1.0 } else { 0.0 };
    assert_eq!(ms_result.model.unwrap().probs(), &[toward_first]);

    let cga_problem = ScriptedProblem::new(1, vec![1.0, 1.0]);
    let cga_cfg = config(1, 2, Algorithm::Cga { k: 2.0 });
    let (cga_result, _) = run_traced(&cga_cfg, &cga_problem, seed);
    let toward_second = if b[1] { 1.0 } else { 0.0 };
    assert_eq!(cga_result.model.unwrap().probs(), &[toward_second]);
}

#[test]
fn window_capacity_is_respected_during_stepping() {
    let problem = onemax(4, 1.0);
    let mut optimizer = SwCgaOptimizer::new(4, 100.0, 3, 100, problem.optimum()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut sink = VecSink::default();
    for step in 1..=7 {
        optimizer.step(&problem, &mut rng, &mut sink).unwrap();
        assert_eq!(optimizer.window().len(), step.min(3));
        assert_eq!(optimizer.evals_used(), step as u64);
    }
}
