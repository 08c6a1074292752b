//! Monte Carlo verification of distortion guarantees.
//!
//! Trial `i` of a run with master seed `s` uses `derive_seed(s, i)`; the
//! transform and the input vector are drawn from `derive_seed(·, 0)` and
//! `derive_seed(·, 1)` of that. Results are therefore identical whichever
//! [`Execution`] mode runs them.

mod bench;
mod dotprod;
mod failure;
mod hard;
mod pointset;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{JlError, Result};
use crate::seed::rng_from_seed;
use crate::sparse::fh_hard_instance;
use crate::structured::{lwt_hard_instance, SeedMatrix};

pub use bench::{bench_embed, BenchRecord};
pub use dotprod::{dot_product_check, DotProductReport};
pub use failure::{audit_log, estimate_failure, estimate_failure_logged, FailureReport, TrialRecord};
pub use hard::{
    fh_experiment, hard_instance_experiment, lwt_experiment, HardInstanceReport, HardRow, HardTarget,
    LwtExperiment,
};
pub use pointset::{verify_pointset, PointsetReport};

/// How independent trials are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Execution {
    /// Rayon worker pool; sequential when built without the `parallel`
    /// feature.
    #[default]
    Parallel,
    Sequential,
}

/// `f(0), …, f(trials − 1)` in index order.
pub fn map_trials<T, F>(exec: Execution, trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..trials).into_par_iter().map(f).collect()
        }
        _ => (0..trials).map(f).collect(),
    }
}

/// Input vector generator for trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum VectorGen {
    /// Uniform on the unit sphere.
    UnitSphere,
    /// `k` ones at uniformly random distinct positions.
    BinaryK(usize),
    /// `k` leading entries `1/√k`.
    FhHard(usize),
    /// Lean Walsh zero-collapse instance for the default 2×4 seed matrix.
    LwtHard {
        delta: f64,
    },
    Fixed(Vec<f64>),
}

impl VectorGen {
    pub fn generate(&self, d: usize, seed: u64) -> Result<Vec<f64>> {
        let x = match self {
            Self::UnitSphere => {
                let mut rng = rng_from_seed(seed);
                loop {
                    let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
                    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if norm > 0.0 {
                        break g.into_iter().map(|v| v / norm).collect();
                    }
                }
            }
            Self::BinaryK(k) => {
                if *k == 0 || *k > d {
                    return Err(JlError::param(format!("need 1 <= k <= d, got k = {k}")));
                }
                let mut rng = rng_from_seed(seed);
                let mut x = vec![0.0; d];
                for i in rand::seq::index::sample(&mut rng, d, *k) {
                    x[i] = 1.0;
                }
                x
            }
            Self::FhHard(k) => fh_hard_instance(*k, d)?,
            Self::LwtHard { delta } => lwt_hard_instance(&SeedMatrix::partial_hadamard(2, 4)?, *delta, d)?,
            Self::Fixed(x) => {
                if x.len() != d {
                    return Err(JlError::DimensionMismatch { expected: d, found: x.len() });
                }
                x.clone()
            }
        };
        if x.iter().all(|&v| v == 0.0) {
            return Err(JlError::domain("generated vector is zero"));
        }
        Ok(x)
    }

    /// Whether every call returns the same vector.
    pub fn is_deterministic(&self) -> bool {
        !matches!(self, Self::UnitSphere | Self::BinaryK(_))
    }
}
