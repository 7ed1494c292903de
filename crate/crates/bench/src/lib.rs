//! Shared fixtures for the benchmarks.

use bayesges::sim::{random_linear_sem, sample, split_seed};
use bayesges::{Dataset, SemSpec};

/// A seeded linear-Gaussian problem of the given size.
pub fn linear_problem(d: usize, edge_prob: f64, n: usize, seed: u64) -> (SemSpec, Dataset) {
    let spec = random_linear_sem(d, edge_prob, (0.5, 1.5), 1.0, split_seed(seed, "sem")).expect("valid spec");
    let data = sample(&spec, n, split_seed(seed, "sample")).expect("sampling succeeds");
    (spec, data)
}
