use serde::{Deserialize, Serialize};

use super::{map_trials, Execution, VectorGen};
use crate::error::{JlError, Result};
use crate::params::{sq_norm_ratio, JlParams};
use crate::seed::derive_seed;
use crate::stats::DistortionStats;
use crate::transform::{LinearEmbedding, TransformKind};

/// One trial of a logged run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub ratio: f64,
}

/// JSON report of a failure-rate estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureReport {
    pub kind: String,
    pub d: usize,
    pub m: usize,
    pub eps: f64,
    pub delta: f64,
    pub trials: u64,
    pub failures: u64,
    pub failure_rate: f64,
    pub ci95: f64,
    pub mean_sq_ratio: f64,
    pub seed: u64,
}

impl FailureReport {
    pub fn new(kind: &TransformKind, p: &JlParams, stats: &DistortionStats) -> Self {
        Self {
            kind: kind.name().to_string(),
            d: p.d,
            m: p.m,
            eps: p.eps,
            delta: p.delta,
            trials: stats.trials,
            failures: stats.failures,
            failure_rate: stats.failure_rate,
            ci95: stats.ci95_halfwidth,
            mean_sq_ratio: stats.mean_sq_ratio,
            seed: p.seed,
        }
    }
}

fn run_trial(kind: &TransformKind, p: &JlParams, gen: &VectorGen, seed: u64) -> Result<f64> {
    let f = kind.sample(&p.with_seed(derive_seed(seed, 0)))?;
    let x = gen.generate(p.d, derive_seed(seed, 1))?;
    sq_norm_ratio(&x, &f.apply(&x)?)
}

/// Per-trial `(seed, ‖f(x)‖²/‖x‖²)` with a fresh transform each trial.
pub fn estimate_failure_logged(
    kind: &TransformKind,
    p: &JlParams,
    gen: &VectorGen,
    trials: u64,
    exec: Execution,
) -> Result<(DistortionStats, Vec<TrialRecord>)> {
    if trials < 100 {
        return Err(JlError::param(format!("need at least 100 trials, got {trials}")));
    }
    let log = map_trials(exec, trials, |i| {
        let seed = derive_seed(p.seed, i);
        run_trial(kind, p, gen, seed).map(|ratio| TrialRecord { seed, ratio })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = log.iter().map(|r| r.ratio).collect();
    Ok((DistortionStats::from_ratios(&ratios, p.eps), log))
}

pub fn estimate_failure(
    kind: &TransformKind,
    p: &JlParams,
    gen: &VectorGen,
    trials: u64,
    exec: Execution,
) -> Result<DistortionStats> {
    estimate_failure_logged(kind, p, gen, trials, exec).map(|(s, _)| s)
}

/// Recounts a saved log by re-running every recorded trial from its seed
/// and comparing the distortion bit for bit.
pub fn audit_log(
    kind: &TransformKind,
    p: &JlParams,
    gen: &VectorGen,
    log: &[TrialRecord],
) -> Result<DistortionStats> {
    let mut ratios = Vec::with_capacity(log.len());
    for rec in log {
        let ratio = run_trial(kind, p, gen, rec.seed)?;
        if ratio.to_bits() != rec.ratio.to_bits() {
            return Err(JlError::domain(format!(
                "trial with seed {} replayed to {ratio}, log has {}",
                rec.seed, rec.ratio
            )));
        }
        ratios.push(ratio);
    }
    Ok(DistortionStats::from_ratios(&ratios, p.eps))
}
