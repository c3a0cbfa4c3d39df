//! Rayon fan-out over windows and replications. Results are merged in
//! index order, so they match the serial paths exactly.

use comove_core::simgen::{check_study, replication_outcome, tally};
use comove_core::{McStudy, PairReport, PairTest, PrewhitenConfig, ReturnSeries, WindowSpec};
use rayon::prelude::*;

pub fn run_pair_test_parallel(
    benchmark: &ReturnSeries,
    target: &ReturnSeries,
    spec: WindowSpec,
    config: PrewhitenConfig,
) -> comove_core::Result<PairReport> {
    let test = PairTest::prepare(benchmark, target, spec, config)?;
    let outcomes = (0..test.window_count()).into_par_iter().map(|k| test.run_window(k)).collect();
    test.finish(outcomes)
}

pub fn monte_carlo_study_parallel(
    theta: f64,
    spec: &WindowSpec,
    length: usize,
    replications: usize,
    seed: u64,
) -> comove_core::Result<McStudy> {
    check_study(replications, length, spec)?;
    let outcomes = (0..replications as u64)
        .into_par_iter()
        .map(|i| replication_outcome(theta, spec, length, seed, i))
        .collect::<comove_core::Result<Vec<_>>>()?;
    Ok(tally(theta, spec, length, seed, outcomes))
}

/// Runs `f` on a pool of `threads` workers, or the global pool for `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
    }
}
