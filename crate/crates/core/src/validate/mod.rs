//! Finite-difference oracles, operator-norm estimation, perturbation
//! trials and the Z_n(t) sweep.

mod opnorm;
pub mod rng;
mod sweep;
mod trial;

pub use opnorm::{estimate_opnorm, estimate_pair_opnorm_frobenius, fd_check, OpNorm};
pub use sweep::{linspace, zn, zn_closed_form, zn_row, SweepRow};
pub use trial::{run_trial, run_trial_with, EpsilonRow, FactorRecord, PerturbationTrial, EPSILONS, FACTORS, SLACK};

use rayon::prelude::*;

use crate::error::Result;
use crate::matcore::{ComplexMatrix, NormKind};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "MOSTOWKIT_THREADS";

fn pool() -> rayon::ThreadPool {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// Trials for seeds seed, seed + 1, ..., in seed order.
pub fn run_trials(
    z: &ComplexMatrix,
    seed: u64,
    count: usize,
    norm_kind: NormKind,
    epsilons: &[f64],
) -> Vec<Result<PerturbationTrial>> {
    pool().install(|| {
        (0..count as u64)
            .into_par_iter()
            .map(|i| run_trial_with(z, seed + i, norm_kind, epsilons))
            .collect()
    })
}

/// f_n and g_n on a grid, in grid order.
pub fn zn_sweep(n: usize, t_grid: &[f64]) -> Result<Vec<SweepRow>> {
    pool().install(|| t_grid.par_iter().map(|&t| zn_row(n, t)).collect())
}
