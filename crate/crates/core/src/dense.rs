//! Dense i.i.d. JL matrices.
//!
//! Entries are stored unscaled (mean 0, variance 1); the `1/√m` normalisation
//! is applied in [`DenseTransform::apply`].

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, JlError, Result};
use crate::params::JlParams;
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DenseKind {
    Gaussian,
    /// Gaussian rows orthonormalised by Gram–Schmidt and rescaled to norm `√d`.
    OrthonormalGaussian,
    Rademacher,
    /// Zero with probability `1 − q`, otherwise `±1/√q`.
    Achlioptas {
        q: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseTransform {
    kind: DenseKind,
    params: JlParams,
    /// Row-major `m × d`.
    matrix: Vec<f64>,
}

/// Standard normals drawn with `rand_distr::StandardNormal` (ziggurat) from
/// `ChaCha8Rng::seed_from_u64(seed)`, row-major.
pub fn gaussian_new(p: &JlParams) -> DenseTransform {
    let mut rng = rng_from_seed(p.seed);
    let matrix = (0..p.m * p.d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    DenseTransform { kind: DenseKind::Gaussian, params: *p, matrix }
}

/// Gaussian matrix whose rows are orthonormalised and scaled to norm `√d`,
/// so every entry still has unit variance on average. Requires `m ≤ d`.
pub fn gaussian_orthonormal_new(p: &JlParams) -> Result<DenseTransform> {
    if p.m > p.d {
        return Err(JlError::param(format!("cannot orthonormalise {} rows in dimension {}", p.m, p.d)));
    }
    let mut t = gaussian_new(p);
    let d = p.d;
    let target = (d as f64).sqrt();
    for i in 0..p.m {
        let (done, rest) = t.matrix.split_at_mut(i * d);
        let row = &mut rest[..d];
        // Two passes of modified Gram–Schmidt keep the rows orthogonal to
        // working precision.
        for _ in 0..2 {
            for prev in done.chunks_exact(d) {
                let proj = dot(prev, row) / (d as f64);
                row.iter_mut().zip(prev).for_each(|(r, q)| *r -= proj * q);
            }
        }
        let norm = dot(row, row).sqrt();
        if norm == 0.0 {
            return Err(JlError::domain("degenerate Gaussian sample"));
        }
        row.iter_mut().for_each(|r| *r *= target / norm);
    }
    t.kind = DenseKind::OrthonormalGaussian;
    Ok(t)
}

/// Entries are the bits of successive `u64` draws, least significant first:
/// bit 1 → `+1`, bit 0 → `−1`.
pub fn rademacher_new(p: &JlParams) -> DenseTransform {
    let mut rng = rng_from_seed(p.seed);
    let n = p.m * p.d;
    let mut matrix = Vec::with_capacity(n);
    while matrix.len() < n {
        let bits: u64 = rng.random();
        let take = (n - matrix.len()).min(64);
        matrix.extend((0..take).map(|b| if (bits >> b) & 1 == 1 { 1.0 } else { -1.0 }));
    }
    DenseTransform { kind: DenseKind::Rademacher, params: *p, matrix }
}

/// One uniform `u ∈ [0,1)` per entry: `u < q/2 → −1/√q`, `u < q → +1/√q`,
/// otherwise 0.
pub fn achlioptas_new(p: &JlParams, q: f64) -> Result<DenseTransform> {
    if !(q.is_finite() && q > 0.0 && q <= 1.0) {
        return Err(JlError::param(format!("Achlioptas q must lie in (0, 1], got {q}")));
    }
    let mut rng = rng_from_seed(p.seed);
    let v = 1.0 / q.sqrt();
    let half = q / 2.0;
    let matrix = (0..p.m * p.d)
        .map(|_| {
            let u: f64 = rng.random();
            if u < half {
                -v
            } else if u < q {
                v
            } else {
                0.0
            }
        })
        .collect();
    Ok(DenseTransform { kind: DenseKind::Achlioptas { q }, params: *p, matrix })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl DenseTransform {
    pub fn kind(&self) -> DenseKind {
        self.kind
    }

    pub fn params(&self) -> &JlParams {
        &self.params
    }

    /// Unscaled entries, row-major `m × d`.
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.params.d + col]
    }

    pub fn source_dim(&self) -> usize {
        self.params.d
    }

    pub fn target_dim(&self) -> usize {
        self.params.m
    }

    /// `(1/√m)·A·x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.params.d, x.len())?;
        let scale = 1.0 / (self.params.m as f64).sqrt();
        Ok(self.matrix.chunks_exact(self.params.d).map(|row| dot(row, x) * scale).collect())
    }
}
