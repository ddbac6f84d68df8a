//! Order-preserving parallel runners. Results are assembled by index, so
//! output never depends on the thread count.

use rayon::prelude::*;
use renyi_converse_core::entanglement::{RreeConfig, RreeEstimate, RreeProblem};
use renyi_converse_core::propcheck::{aggregate, trial_margin, trial_seed, CheckId, CheckReport};
use renyi_converse_core::qstate::{BipartiteSplit, DensityMatrix};
use renyi_converse_core::Result;

/// Thread pool of `jobs` workers (0 = one per core).
pub fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool")
}

/// `items.map(f)` evaluated concurrently, in input order.
pub fn map_ordered<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.par_iter().map(f).collect()
}

/// [`renyi_converse_core::entanglement::rree_estimate`] with restarts run
/// concurrently.
pub fn rree_estimate(rho: &DensityMatrix, split: &BipartiteSplit, alpha: f64, config: &RreeConfig) -> Result<RreeEstimate> {
    let problem = RreeProblem::new(rho, split, alpha, config)?;
    let outcomes = (0..problem.restarts())
        .into_par_iter()
        .map(|i| problem.run_restart(i))
        .collect::<Result<Vec<_>>>()?;
    problem.finish(outcomes)
}

/// [`renyi_converse_core::propcheck::run_check`] with trials run
/// concurrently.
pub fn run_check(check_id: CheckId, trials: usize, seed: u64) -> Result<CheckReport> {
    let margins = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = trial_seed(seed, i);
            trial_margin(check_id, s).map(|m| (s, m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(check_id, seed, &margins))
}

#[cfg(test)]
mod tests {
    use super::*;
    use renyi_converse_core::qstate::Preset;

    #[test]
    fn matches_sequential_runs() {
        let seq = renyi_converse_core::propcheck::run_check(CheckId::Vdh, 30, 5).unwrap();
        for jobs in [1, 3] {
            let par = pool(jobs).install(|| run_check(CheckId::Vdh, 30, 5)).unwrap();
            assert_eq!(par, seq);
        }
        let psi = "schmidt(0.7,0.3)".parse::<Preset>().unwrap().build().unwrap();
        let rho = psi.density();
        let split = BipartiteSplit::new(rho.dims(), &["A"]).unwrap();
        let config = RreeConfig { restarts: 3, max_iters: 50, ..RreeConfig::default() };
        let seq = renyi_converse_core::entanglement::rree_estimate(&rho, &split, 1.5, &config).unwrap();
        let par = pool(2).install(|| rree_estimate(&rho, &split, 1.5, &config)).unwrap();
        assert_eq!(par.upper_estimate.to_bits(), seq.upper_estimate.to_bits());
    }
}
