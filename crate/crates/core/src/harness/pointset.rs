use serde::{Deserialize, Serialize};

use crate::error::{JlError, Result};
use crate::params::JlParams;
use crate::seed::derive_seed;
use crate::stats::worst_pair_distortion;
use crate::transform::{LinearEmbedding, TransformKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointsetReport {
    pub pass: bool,
    pub pairs: usize,
    /// Largest `|‖f(x)−f(y)‖²/‖x−y‖² − 1|` of the accepted (or last) sample.
    pub worst_distortion: f64,
    /// Transforms rejected before the reported one.
    pub resamples: usize,
}

/// Samples a transform and checks every pair of `points` for ε-distortion.
/// Up to `max_resamples` further transforms are tried on failure; attempt
/// `a` uses seed `derive_seed(p.seed, a)`.
pub fn verify_pointset(
    kind: &TransformKind,
    p: &JlParams,
    points: &[Vec<f64>],
    max_resamples: usize,
) -> Result<PointsetReport> {
    if points.len() < 2 {
        return Err(JlError::param("need at least two points"));
    }
    let pairs = points.len() * (points.len() - 1) / 2;
    let mut attempt = 0;
    loop {
        let f = kind.sample(&p.with_seed(derive_seed(p.seed, attempt as u64)))?;
        let embedded = points.iter().map(|x| f.apply(x)).collect::<Result<Vec<_>>>()?;
        let worst = worst_pair_distortion(points, &embedded);
        let pass = worst <= p.eps;
        if pass || attempt == max_resamples {
            return Ok(PointsetReport { pass, pairs, worst_distortion: worst, resamples: attempt });
        }
        attempt += 1;
    }
}
