//! Shared parameters and target-dimension formulas.

use serde::{Deserialize, Serialize};

use crate::error::{JlError, Result};

/// Leading constant of the distributional target dimension `C·ε⁻²·ln(2/δ)`.
pub const DISTRIBUTIONAL_CONSTANT: f64 = 8.0;

/// Source/target dimensions, distortion, failure probability and seed of a
/// single transform.
///
/// `m > d` is allowed: callers may oversample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JlParams {
    pub d: usize,
    pub m: usize,
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
}

impl JlParams {
    pub fn new(d: usize, m: usize, eps: f64, delta: f64, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(JlError::param("source dimension d must be >= 1"));
        }
        if m == 0 {
            return Err(JlError::param("target dimension m must be >= 1"));
        }
        check_unit_interval("eps", eps)?;
        check_unit_interval("delta", delta)?;
        Ok(Self { d, m, eps, delta, seed })
    }

    /// Parameters with `m = target_dim_union(eps, delta)`.
    pub fn with_auto_m(d: usize, eps: f64, delta: f64, seed: u64) -> Result<Self> {
        let m = target_dim_union(eps, delta)?;
        Self::new(d, m, eps, delta, seed)
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_target_dim(self, m: usize) -> Result<Self> {
        Self::new(self.d, m, self.eps, self.delta, self.seed)
    }

    pub fn with_source_dim(self, d: usize) -> Result<Self> {
        Self::new(d, self.m, self.eps, self.delta, self.seed)
    }
}

pub(crate) fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(JlError::param(format!("{name} must lie in (0, 1), got {v}")))
    }
}

/// Frankl–Maehara target dimension `⌈8 (ε² − 2ε³/3)⁻¹ ln n⌉` for a point set
/// of size `n`, clamped to at least 1.
///
/// `n` is a real so the formula can be evaluated at non-integer sizes.
pub fn target_dim_fm(eps: f64, n: f64) -> Result<usize> {
    check_unit_interval("eps", eps)?;
    if !(n.is_finite() && n >= 1.0) {
        return Err(JlError::param(format!("point count must be >= 1, got {n}")));
    }
    let denom = eps * eps - 2.0 * eps * eps * eps / 3.0;
    let m = (8.0 / denom * n.ln()).ceil();
    Ok(clamp_dim(m))
}

/// Distributional target dimension `⌈8 ε⁻² ln(2/δ)⌉`, clamped to at least 1.
pub fn target_dim_union(eps: f64, delta: f64) -> Result<usize> {
    target_dim_union_with(eps, delta, DISTRIBUTIONAL_CONSTANT)
}

/// [`target_dim_union`] with a caller-chosen leading constant.
pub fn target_dim_union_with(eps: f64, delta: f64, constant: f64) -> Result<usize> {
    check_unit_interval("eps", eps)?;
    check_unit_interval("delta", delta)?;
    if !(constant.is_finite() && constant > 0.0) {
        return Err(JlError::param("leading constant must be positive"));
    }
    let m = (constant / (eps * eps) * (2.0 / delta).ln()).ceil();
    Ok(clamp_dim(m))
}

fn clamp_dim(m: f64) -> usize {
    if m.is_nan() || m < 1.0 {
        1
    } else {
        m as usize
    }
}

pub fn sq_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `‖y‖² / ‖x‖²`, the squared-norm distortion of an embedding `y` of `x`.
pub fn sq_norm_ratio(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(JlError::domain("vectors must have finite entries"));
    }
    let nx = sq_norm(x);
    if nx == 0.0 {
        return Err(JlError::domain("squared-norm ratio of the zero vector"));
    }
    Ok(sq_norm(y) / nx)
}
