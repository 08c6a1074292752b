use serde::{Deserialize, Serialize};

use super::{map_trials, Execution};
use crate::error::Result;
use crate::params::JlParams;
use crate::seed::derive_seed;
use crate::stats::is_failure;
use crate::transform::{LinearEmbedding, TransformKind};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DotProductReport {
    /// `(pair, seed)` combinations evaluated.
    pub evaluated: u64,
    /// Those where every norm in the polarisation argument was ε-preserved.
    pub conditioned: u64,
    pub conditional_violations: u64,
    pub unconditional_violations: u64,
    /// Largest `|⟨f(x),f(y)⟩ − ⟨x,y⟩| / (‖x‖‖y‖)` among conditioned trials.
    pub max_conditional_error: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

fn combine(a: &[f64], sa: f64, b: &[f64], sb: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(u, v)| sa * u + sb * v).collect()
}

fn preserved(x: &[f64], fx: &[f64], eps: f64) -> bool {
    let n = norm2(x);
    if n == 0.0 {
        return norm2(fx) == 0.0;
    }
    !is_failure(norm2(fx) / n, eps)
}

/// Outcome for one pair under one transform: `(conditioned, conditional
/// violation, unconditional violation, normalised error)`.
fn check_pair(x: &[f64], y: &[f64], fx: &[f64], fy: &[f64], eps: f64) -> (bool, bool, bool, f64) {
    let (nx, ny) = (norm2(x).sqrt(), norm2(y).sqrt());
    let err = (dot(fx, fy) - dot(x, y)).abs();
    if nx == 0.0 || ny == 0.0 {
        let violated = err > 0.0;
        return (true, violated, violated, 0.0);
    }
    let bound = eps * nx * ny;
    let slack = 1e-12 * nx * ny;
    let unconditional = err > bound + slack;
    let mut ok = preserved(x, fx, eps) && preserved(y, fy, eps);
    for s in [1.0, -1.0] {
        ok &= preserved(&combine(x, 1.0, y, s), &combine(fx, 1.0, fy, s), eps);
        ok &= preserved(&combine(x, 1.0 / nx, y, s / ny), &combine(fx, 1.0 / nx, fy, s / ny), eps);
    }
    (ok, ok && unconditional, unconditional, err / (nx * ny))
}

/// For each trial seed, samples one transform and checks every pair.
pub fn dot_product_check(
    kind: &TransformKind,
    p: &JlParams,
    pairs: &[(Vec<f64>, Vec<f64>)],
    trials: u64,
    exec: Execution,
) -> Result<DotProductReport> {
    let per_trial = map_trials(exec, trials, |t| -> Result<DotProductReport> {
        let f = kind.sample(&p.with_seed(derive_seed(p.seed, t)))?;
        let mut r = DotProductReport::default();
        for (x, y) in pairs {
            let (fx, fy) = (f.apply(x)?, f.apply(y)?);
            let (cond, cviol, uviol, err) = check_pair(x, y, &fx, &fy, p.eps);
            r.evaluated += 1;
            r.unconditional_violations += uviol as u64;
            if cond {
                r.conditioned += 1;
                r.conditional_violations += cviol as u64;
                r.max_conditional_error = r.max_conditional_error.max(err);
            }
        }
        Ok(r)
    });
    let mut total = DotProductReport::default();
    for r in per_trial {
        let r = r?;
        total.evaluated += r.evaluated;
        total.conditioned += r.conditioned;
        total.conditional_violations += r.conditional_violations;
        total.unconditional_violations += r.unconditional_violations;
        total.max_conditional_error = total.max_conditional_error.max(r.max_conditional_error);
    }
    Ok(total)
}
