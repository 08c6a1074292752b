use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::params::JlParams;
use crate::seed::{derive_seed, rng_from_seed};
use crate::stats::median;
use crate::transform::{LinearEmbedding, TransformKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub kind: String,
    pub d: usize,
    pub m: usize,
    pub median_ns: f64,
    pub reps: usize,
}

/// Median wall time of one `apply` per `(kind, d)`, kinds outermost.
/// Sampling is excluded; one untimed apply precedes the timed ones and
/// `reps` is raised to at least 5.
pub fn bench_embed(
    kinds: &[TransformKind],
    d_list: &[usize],
    m: usize,
    reps: usize,
    seed: u64,
) -> Result<Vec<BenchRecord>> {
    let reps = reps.max(5);
    let mut out = Vec::with_capacity(kinds.len() * d_list.len());
    for kind in kinds {
        for &d in d_list {
            let p = JlParams::new(d, m, 0.25, 0.05, derive_seed(seed, d as u64))?;
            let f = kind.sample(&p)?;
            let mut rng = rng_from_seed(seed);
            let x: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            std::hint::black_box(f.apply(&x)?);
            let mut times = Vec::with_capacity(reps);
            for _ in 0..reps {
                let start = Instant::now();
                std::hint::black_box(f.apply(std::hint::black_box(&x))?);
                times.push(start.elapsed().as_nanos() as f64);
            }
            out.push(BenchRecord {
                kind: kind.name().to_string(),
                d,
                m: f.target_dim(),
                median_ns: median(&times),
                reps,
            });
        }
    }
    Ok(out)
}
