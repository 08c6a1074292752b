use serde::{Deserialize, Serialize};

use super::{estimate_failure, map_trials, Execution, VectorGen};
use crate::error::{JlError, Result};
use crate::params::JlParams;
use crate::seed::derive_seed;
use crate::structured::{lwt_hard_instance, lwtjl_new, LwtInner, SeedMatrix};
use crate::transform::TransformKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HardTarget {
    /// Feature Hashing on `k` leading entries `1/√k`.
    Fh,
    /// LWTJL zero collapse.
    Lwt,
    /// Toeplitz on the Feature Hashing shapes; exploratory, no claim.
    ToeplitzFhShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardRow {
    /// `k` for the binary shapes, `‖x‖₀` for the lean Walsh instance.
    pub k: usize,
    pub trials: u64,
    /// Distortion failures, or zero outputs for the lean Walsh instance.
    pub events: u64,
    pub rate: f64,
    pub sigma: f64,
}

impl HardRow {
    fn new(k: usize, trials: u64, events: u64) -> Self {
        let rate = events as f64 / trials as f64;
        Self { k, trials, events, rate, sigma: (rate * (1.0 - rate) / trials as f64).sqrt() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardInstanceReport {
    pub target: HardTarget,
    pub d: usize,
    pub m: usize,
    pub eps: f64,
    pub delta: f64,
    pub rows: Vec<HardRow>,
    /// Lean Walsh only: trials where `D` fixed `x`.
    pub fixed_by_d: Option<HardRow>,
    /// Lean Walsh only: `2^{−‖x‖₀}`.
    pub analytic: Option<f64>,
    /// Whether some measured rate exceeds δ.
    pub exceeds_delta: bool,
}

/// Failure rate of `kind` on `k` leading entries `1/√k` for each `k`.
pub fn fh_experiment(
    kind: &TransformKind,
    p: &JlParams,
    ks: &[usize],
    trials: u64,
    exec: Execution,
) -> Result<Vec<HardRow>> {
    ks.iter()
        .map(|&k| {
            let s = estimate_failure(kind, p, &VectorGen::FhHard(k), trials, exec)?;
            Ok(HardRow::new(k, s.trials, s.failures))
        })
        .collect()
}

/// Lean Walsh zero-collapse measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LwtExperiment {
    pub nnz: usize,
    pub zero_outputs: HardRow,
    pub fixed_by_d: HardRow,
}

/// LWTJL with the 2×4 partial Hadamard seed on the zero-collapse instance.
/// An output counts as zero when `‖f(x)‖ ≤ 1e-12·‖x‖`.
pub fn lwt_experiment(p: &JlParams, inner: LwtInner, trials: u64, exec: Execution) -> Result<LwtExperiment> {
    let seed_matrix = SeedMatrix::partial_hadamard(2, 4)?;
    let x = lwt_hard_instance(&seed_matrix, p.delta, p.d)?;
    let support: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0.0).collect();
    let x_norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let outcomes = map_trials(exec, trials, |t| -> Result<(bool, bool)> {
        let f = lwtjl_new(&p.with_seed(derive_seed(p.seed, t)), seed_matrix.clone(), inner)?;
        let fixed = support.iter().all(|&i| f.signs()[i] == 1.0);
        let y = f.apply(&x)?;
        let zero = y.iter().map(|v| v * v).sum::<f64>().sqrt() <= 1e-12 * x_norm;
        Ok((zero, fixed))
    });
    let (mut zeros, mut fixed) = (0u64, 0u64);
    for o in outcomes {
        let (z, f) = o?;
        zeros += z as u64;
        fixed += f as u64;
    }
    Ok(LwtExperiment {
        nnz: support.len(),
        zero_outputs: HardRow::new(support.len(), trials, zeros),
        fixed_by_d: HardRow::new(support.len(), trials, fixed),
    })
}

/// Runs one hard-instance family. `ks` is ignored for [`HardTarget::Lwt`].
pub fn hard_instance_experiment(
    target: HardTarget,
    p: &JlParams,
    ks: &[usize],
    trials: u64,
    exec: Execution,
) -> Result<HardInstanceReport> {
    if trials == 0 {
        return Err(JlError::param("need at least one trial"));
    }
    let (rows, fixed_by_d, analytic) = match target {
        HardTarget::Fh => (fh_experiment(&TransformKind::FeatureHashing, p, ks, trials, exec)?, None, None),
        HardTarget::ToeplitzFhShape => {
            (fh_experiment(&TransformKind::Toeplitz, p, ks, trials, exec)?, None, None)
        }
        HardTarget::Lwt => {
            let e = lwt_experiment(p, LwtInner::default(), trials, exec)?;
            (vec![e.zero_outputs], Some(e.fixed_by_d), Some(0.5f64.powi(e.nnz as i32)))
        }
    };
    let exceeds_delta = rows.iter().any(|r| r.rate > p.delta);
    Ok(HardInstanceReport {
        target,
        d: p.d,
        m: p.m,
        eps: p.eps,
        delta: p.delta,
        rows,
        fixed_by_d,
        analytic,
        exceeds_delta,
    })
}
