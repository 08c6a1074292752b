//! Rademacher Toeplitz transforms applied blockwise through circulant
//! embeddings.

use rand::Rng;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft::FftPlan;
use crate::error::{check_dim, Result};
use crate::params::JlParams;
use crate::seed::rng_from_seed;

/// The `m × d` Toeplitz matrix `T_{ij} = t_{j−i}` and a sign diagonal `D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzSpec {
    pub m: usize,
    pub d: usize,
    /// `t_k` for `k = −(m−1) ..= d−1`, stored at `k + m − 1`.
    pub t: Vec<f64>,
    pub sign_diag: Vec<f64>,
}

impl ToeplitzSpec {
    /// Draws `t` (`d + m − 1` signs) and then `D` (`d` signs), one boolean
    /// per entry.
    pub fn sample(m: usize, d: usize, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let mut sign = || if rng.random::<bool>() { 1.0 } else { -1.0 };
        let t = (0..d + m - 1).map(|_| sign()).collect();
        let sign_diag = (0..d).map(|_| sign()).collect();
        Self { m, d, t, sign_diag }
    }

    /// `t_k`, or 0 outside `−(m−1) ..= d−1`.
    pub fn t_at(&self, k: isize) -> f64 {
        let idx = k + self.m as isize - 1;
        if idx < 0 || idx as usize >= self.t.len() {
            0.0
        } else {
            self.t[idx as usize]
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.t_at(j as isize - i as isize)
    }
}

/// Precomputed block spectra for `T·x`. Columns are split into `⌈d/m⌉`
/// blocks of width `m`; block `b` is the `m × m` Toeplitz matrix with
/// diagonals `t_{bm + k − i}`, embedded in a circulant of length
/// `N = next_pow2(2m)`.
#[derive(Debug, Clone)]
pub struct BlockedToeplitz {
    m: usize,
    d: usize,
    plan: FftPlan,
    spectra: Vec<Vec<Complex64>>,
}

impl BlockedToeplitz {
    pub fn new(spec: &ToeplitzSpec) -> Self {
        let m = spec.m;
        let n = (2 * m).next_power_of_two();
        let plan = FftPlan::new(n);
        let blocks = spec.d.div_ceil(m);
        let spectra = (0..blocks)
            .map(|b| {
                // y_i = Σ_k h_{i−k} x_k with h_n = t_{bm − n}; negative n wraps.
                let base = (b * m) as isize;
                let mut h = vec![0.0; n];
                for off in 0..m as isize {
                    h[off as usize] = spec.t_at(base - off);
                    if off > 0 {
                        h[n - off as usize] = spec.t_at(base + off);
                    }
                }
                plan.forward_real(&h)
            })
            .collect();
        Self { m, d: spec.d, plan, spectra }
    }

    /// `T·x` without the sign diagonal or scaling.
    pub fn apply_unsigned(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.d, x.len())?;
        let n = self.plan.len();
        let mut acc = vec![Complex64::new(0.0, 0.0); n];
        for (b, spectrum) in self.spectra.iter().enumerate() {
            let lo = b * self.m;
            let hi = (lo + self.m).min(self.d);
            let xb = &x[lo..hi];
            if xb.iter().all(|&v| v == 0.0) {
                continue;
            }
            let fx = self.plan.forward_real(xb);
            acc.iter_mut().zip(spectrum.iter().zip(&fx)).for_each(|(a, (h, v))| *a += h * v);
        }
        let mut y = self.plan.inverse_real(acc);
        y.truncate(self.m);
        Ok(y)
    }
}

/// `T·x` by the blocked circulant-embedding route.
pub fn toeplitz_apply_blocked(spec: &ToeplitzSpec, x: &[f64]) -> Result<Vec<f64>> {
    BlockedToeplitz::new(spec).apply_unsigned(x)
}

/// `f(x) = (1/√m)·T·D·x`.
#[derive(Debug, Clone)]
pub struct ToeplitzTransform {
    params: JlParams,
    spec: ToeplitzSpec,
    blocked: BlockedToeplitz,
}

pub fn toeplitz_new(p: &JlParams) -> ToeplitzTransform {
    let spec = ToeplitzSpec::sample(p.m, p.d, p.seed);
    let blocked = BlockedToeplitz::new(&spec);
    ToeplitzTransform { params: *p, spec, blocked }
}

impl ToeplitzTransform {
    pub fn spec(&self) -> &ToeplitzSpec {
        &self.spec
    }

    pub fn params(&self) -> &JlParams {
        &self.params
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.params.d, x.len())?;
        let dx: Vec<f64> = x.iter().zip(&self.spec.sign_diag).map(|(v, s)| v * s).collect();
        let scale = 1.0 / (self.params.m as f64).sqrt();
        let mut y = self.blocked.apply_unsigned(&dx)?;
        y.iter_mut().for_each(|v| *v *= scale);
        Ok(y)
    }
}
