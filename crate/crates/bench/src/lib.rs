//! Fixtures shared by the benchmarks.

use cist_rcube::simulate::{ExperimentConfig, TrafficModel};

/// Graph sizes from small to the largest simulated one (1250 vertices).
pub const SIZES: [(usize, usize, usize); 4] = [(3, 5, 1), (4, 4, 2), (3, 5, 2), (5, 5, 3)];

/// A single-threaded experiment point so timings are comparable.
pub fn experiment(n: usize, m: usize, k: usize, faults: usize, trials: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(n, m, k, TrafficModel::MODEL_1).expect("valid parameters");
    cfg.faults = faults;
    cfg.trials = trials;
    cfg.seed = 1;
    cfg.threads = Some(1);
    cfg
}
