//! Structured JL transforms with subquadratic apply paths.
//!
//! Walsh–Hadamard based kinds (FJLT, SRHT) zero-pad the input to the next
//! power of two. Padding never changes the norm; every padded coordinate is
//! mixed by `H` like any other.

pub mod fft;
pub mod fwht;
pub mod kac;
pub mod lwt;
pub mod toeplitz;

use rand::Rng;
use rand_distr::{Distribution, Geometric, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, JlError, Result};
use crate::params::JlParams;
use crate::seed::{derive_seed, rng_from_seed};

pub use fft::fft_circular_convolve;
pub use fwht::{fwht, fwht_in_place};
pub use kac::{kac_walk_new, kacjl_new, kacjl_sizes, AngleMode, KacJl, KacJlConfig, KacStep, KacWalk};
pub use lwt::{lwt_apply, lwt_hard_instance, lwtjl_new, LwtInner, LwtJl, SeedMatrix};
pub use toeplitz::{toeplitz_apply_blocked, toeplitz_new, BlockedToeplitz, ToeplitzSpec, ToeplitzTransform};

fn random_signs(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect()
}

/// `D·x` zero-padded to `signs.len()`.
fn sign_pad(x: &[f64], signs: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0; signs.len()];
    v.iter_mut().zip(x.iter().zip(signs)).for_each(|(o, (a, s))| *o = a * s);
    v
}

/// Nonzero probability of the FJLT's sparse Gaussian matrix,
/// `min(1, c_q·ln²(2/δ)/d)`.
pub fn fjlt_density(d: usize, delta: f64, c_q: f64) -> f64 {
    let l = (2.0 / delta).ln();
    (c_q * l * l / d as f64).min(1.0)
}

/// `f(x) = (1/√m)·P·Ĥ·D·x` with `Ĥ = H/√d`, where `P` has i.i.d. entries that
/// are nonzero with probability `q` and then `N(0, 1/q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fjlt {
    params: JlParams,
    padded: usize,
    q: f64,
    signs: Vec<f64>,
    /// CSR storage of `P`.
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

/// `D` from `derive_seed(seed, 0)`. `P` from `derive_seed(seed, 1)`: positions
/// are visited row-major by geometric skips (failures before the next
/// nonzero), each followed by one standard normal.
pub fn fjlt_new(p: &JlParams, c_q: f64) -> Result<Fjlt> {
    if !(c_q.is_finite() && c_q > 0.0) {
        return Err(JlError::param("FJLT density constant must be positive"));
    }
    let padded = p.d.next_power_of_two();
    let q = fjlt_density(padded, p.delta, c_q);
    let signs = random_signs(padded, derive_seed(p.seed, 0));
    let mut rng = rng_from_seed(derive_seed(p.seed, 1));
    let geo = Geometric::new(q).map_err(|e| JlError::param(e.to_string()))?;
    let value_scale = 1.0 / q.sqrt();
    let total = (p.m * padded) as u64;
    let mut row_ptr = vec![0usize; p.m + 1];
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    let mut pos = 0u64;
    loop {
        pos = pos.saturating_add(geo.sample(&mut rng));
        if pos >= total {
            break;
        }
        let row = (pos / padded as u64) as usize;
        row_ptr[row + 1] += 1;
        cols.push((pos % padded as u64) as u32);
        let g: f64 = StandardNormal.sample(&mut rng);
        vals.push(g * value_scale);
        pos += 1;
    }
    for i in 0..p.m {
        row_ptr[i + 1] += row_ptr[i];
    }
    Ok(Fjlt { params: *p, padded, q, signs, row_ptr, cols, vals })
}

impl Fjlt {
    pub fn params(&self) -> &JlParams {
        &self.params
    }

    pub fn density(&self) -> f64 {
        self.q
    }

    pub fn padded_dim(&self) -> usize {
        self.padded
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn nonzeros(&self) -> usize {
        self.vals.len()
    }

    /// Entry `(i, j)` of `P`.
    pub fn p_entry(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().position(|&c| c as usize == j).map_or(0.0, |k| self.vals[r.start + k])
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.params.d, x.len())?;
        let mut h = sign_pad(x, &self.signs);
        fwht_in_place(&mut h)?;
        let scale = 1.0 / ((self.padded as f64).sqrt() * (self.params.m as f64).sqrt());
        Ok((0..self.params.m)
            .map(|i| {
                let r = self.row_ptr[i]..self.row_ptr[i + 1];
                let acc: f64 =
                    self.cols[r.clone()].iter().zip(&self.vals[r]).map(|(&c, v)| v * h[c as usize]).sum();
                acc * scale
            })
            .collect())
    }
}

/// `f(x) = √(d/m)·S·Ĥ·D·x`, i.e. `(1/√m)·(H·D·x)` at `m` indices drawn
/// uniformly with replacement from `[0, d)` (`d` after padding).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Srht {
    params: JlParams,
    padded: usize,
    signs: Vec<f64>,
    indices: Vec<u32>,
}

/// `D` from `derive_seed(seed, 0)`, indices from `derive_seed(seed, 1)`.
pub fn srht_new(p: &JlParams) -> Srht {
    let padded = p.d.next_power_of_two();
    let signs = random_signs(padded, derive_seed(p.seed, 0));
    let mut rng = rng_from_seed(derive_seed(p.seed, 1));
    let indices = (0..p.m).map(|_| rng.random_range(0..padded as u32)).collect();
    Srht { params: *p, padded, signs, indices }
}

impl Srht {
    pub fn params(&self) -> &JlParams {
        &self.params
    }

    pub fn padded_dim(&self) -> usize {
        self.padded
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.params.d, x.len())?;
        let mut h = sign_pad(x, &self.signs);
        fwht_in_place(&mut h)?;
        let scale = 1.0 / (self.params.m as f64).sqrt();
        Ok(self.indices.iter().map(|&i| h[i as usize] * scale).collect())
    }
}

#[derive(Debug, Clone)]
pub enum StructuredTransform {
    Fjlt(Fjlt),
    Srht(Srht),
    Toeplitz(ToeplitzTransform),
    Lwtjl(LwtJl),
    KacJl(KacJl),
}

impl StructuredTransform {
    pub fn params(&self) -> &JlParams {
        match self {
            Self::Fjlt(t) => t.params(),
            Self::Srht(t) => t.params(),
            Self::Toeplitz(t) => t.params(),
            Self::Lwtjl(t) => t.params(),
            Self::KacJl(t) => t.params(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.params().d
    }

    pub fn target_dim(&self) -> usize {
        self.params().m
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            Self::Fjlt(t) => t.apply(x),
            Self::Srht(t) => t.apply(x),
            Self::Toeplitz(t) => t.apply(x),
            Self::Lwtjl(t) => t.apply(x),
            Self::KacJl(t) => t.apply(x),
        }
    }
}
