//! Kac random walks and the two-phase KacJL transform.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, TAU};

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, JlError, Result};
use crate::params::JlParams;
use crate::seed::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AngleMode {
    /// θ uniform on `[0, 2π)`.
    #[default]
    Continuous,
    /// θ uniform on `{π/4, 3π/4, 5π/4, 7π/4}`; no trigonometry needed.
    FourAngle,
    /// θ = π/4 always, preceded by a random sign diagonal.
    SingleAngle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KacStep {
    pub i: u32,
    pub j: u32,
    pub theta: f64,
    cos: f64,
    sin: f64,
}

impl KacStep {
    pub fn new(i: u32, j: u32, theta: f64) -> Self {
        Self { i, j, theta, cos: theta.cos(), sin: theta.sin() }
    }

    fn with_trig(i: u32, j: u32, theta: f64, cos: f64, sin: f64) -> Self {
        Self { i, j, theta, cos, sin }
    }

    /// Rotation by θ in the `(i, j)` plane:
    /// `(a, b) ↦ (a cos θ − b sin θ, a sin θ + b cos θ)`.
    #[inline]
    pub fn rotate(&self, x: &mut [f64]) {
        let (i, j) = (self.i as usize, self.j as usize);
        let (a, b) = (x[i], x[j]);
        x[i] = a * self.cos - b * self.sin;
        x[j] = a * self.sin + b * self.cos;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KacWalk {
    dim: usize,
    steps: Vec<KacStep>,
    mode: AngleMode,
    /// Sign diagonal applied first; single-angle mode only.
    signs: Option<Vec<f64>>,
}

/// Samples `steps` i.i.d. rotations: a uniformly random unordered pair
/// `i < j` and an angle from `mode`.
pub fn kac_walk_new(n: usize, steps: usize, seed: u64, mode: AngleMode) -> Result<KacWalk> {
    if n < 2 {
        return Err(JlError::param(format!("Kac walk needs dimension >= 2, got {n}")));
    }
    if n > u32::MAX as usize {
        return Err(JlError::param("Kac walk dimension too large"));
    }
    let mut rng = rng_from_seed(seed);
    let signs = (mode == AngleMode::SingleAngle)
        .then(|| (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect());
    let steps = (0..steps)
        .map(|_| {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            let (i, j) = (a.min(b) as u32, a.max(b) as u32);
            match mode {
                AngleMode::Continuous => KacStep::new(i, j, rng.random::<f64>() * TAU),
                AngleMode::FourAngle => {
                    let q = rng.random_range(0..4u32);
                    let cos = if q == 0 || q == 3 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
                    let sin = if q < 2 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
                    KacStep::with_trig(i, j, (2 * q + 1) as f64 * FRAC_PI_4, cos, sin)
                }
                AngleMode::SingleAngle => KacStep::with_trig(i, j, FRAC_PI_4, FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            }
        })
        .collect();
    Ok(KacWalk { dim: n, steps, mode, signs })
}

impl KacWalk {
    /// Walk with explicit steps and no sign diagonal.
    pub fn from_steps(dim: usize, steps: Vec<KacStep>) -> Result<Self> {
        for s in &steps {
            if s.i >= s.j || s.j as usize >= dim {
                return Err(JlError::param(format!("invalid rotation pair ({}, {})", s.i, s.j)));
            }
        }
        Ok(Self { dim, steps, mode: AngleMode::Continuous, signs: None })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> &[KacStep] {
        &self.steps
    }

    pub fn mode(&self) -> AngleMode {
        self.mode
    }

    pub fn apply_in_place(&self, x: &mut [f64]) -> Result<()> {
        check_dim(self.dim, x.len())?;
        if let Some(signs) = &self.signs {
            x.iter_mut().zip(signs).for_each(|(v, s)| *v *= s);
        }
        for step in &self.steps {
            step.rotate(x);
        }
        Ok(())
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = x.to_vec();
        self.apply_in_place(&mut y)?;
        Ok(y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KacJlConfig {
    /// Point-set size `|X|` in the walk-length formulas; defaults to
    /// `max(3, ⌈1/δ⌉)`.
    pub n_points: Option<usize>,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub mode: AngleMode,
    /// Stop after the first walk and project straight to `m`.
    pub first_phase_only: bool,
}

impl Default for KacJlConfig {
    fn default() -> Self {
        Self {
            n_points: None,
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            mode: AngleMode::Continuous,
            first_phase_only: false,
        }
    }
}

/// `f(x) = √(d/m')·S₂·K₂·S₁·K₁·x`: a walk of length `T₁` on `R^d`, a
/// projection to `d′` coordinates, a walk of length `T₂` on `R^{d′}`, and a
/// projection to `m' = min(m, d′)` coordinates. Projections keep a prefix,
/// or a random subset in single-angle mode. When `m > d′` the output is
/// zero-padded to `m`.
#[derive(Debug, Clone)]
pub struct KacJl {
    params: JlParams,
    intermediate_dim: usize,
    kept: usize,
    first: KacWalk,
    second: Option<KacWalk>,
    select_first: Vec<usize>,
    select_second: Vec<usize>,
    two_phase: bool,
    scale: f64,
}

/// Walk lengths and intermediate dimension for KacJL.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KacJlSizes {
    pub t1: usize,
    pub intermediate_dim: usize,
    pub t2: usize,
}

/// `T₁ = ⌈c1·d·ln d⌉`,
/// `d′ = min(d, ⌈c3·ε⁻²·ln n·(ln ln max(n, 3))²·(ln d)³⌉)`,
/// `T₂ = ⌈c2·d′·ln n⌉`.
pub fn kacjl_sizes(d: usize, eps: f64, n: usize, cfg: &KacJlConfig) -> KacJlSizes {
    let df = d as f64;
    let ln_n = (n.max(1) as f64).ln();
    let lnln = (n.max(3) as f64).ln().ln();
    let t1 = (cfg.c1 * df * df.ln()).ceil().max(0.0) as usize;
    let raw = (cfg.c3 / (eps * eps) * ln_n * lnln * lnln * df.ln().powi(3)).ceil();
    let intermediate_dim = if raw.is_nan() || raw >= df { d } else { (raw as usize).max(1) };
    let t2 = (cfg.c2 * intermediate_dim as f64 * ln_n).ceil().max(0.0) as usize;
    KacJlSizes { t1, intermediate_dim, t2 }
}

pub fn kacjl_new(p: &JlParams, cfg: &KacJlConfig) -> Result<KacJl> {
    if p.d < 2 {
        return Err(JlError::param("KacJL needs d >= 2"));
    }
    let n = cfg.n_points.unwrap_or_else(|| ((1.0 / p.delta).ceil() as usize).max(3));
    let sizes = kacjl_sizes(p.d, p.eps, n, cfg);
    let first = kac_walk_new(p.d, sizes.t1, derive_seed(p.seed, 0), cfg.mode)?;
    let random_subsets = cfg.mode == AngleMode::SingleAngle;
    let mut subset_rng = rng_from_seed(derive_seed(p.seed, 2));
    let mut pick = |from: usize, count: usize| -> Vec<usize> {
        if random_subsets {
            let mut v = sample(&mut subset_rng, from, count).into_vec();
            v.sort_unstable();
            v
        } else {
            (0..count).collect()
        }
    };

    let (intermediate_dim, second, select_first, kept, select_second) = if cfg.first_phase_only {
        let kept = p.m.min(p.d);
        (p.d, None, pick(p.d, kept), kept, Vec::new())
    } else {
        let dp = sizes.intermediate_dim;
        let select_first = pick(p.d, dp);
        let second =
            if dp >= 2 { Some(kac_walk_new(dp, sizes.t2, derive_seed(p.seed, 1), cfg.mode)?) } else { None };
        let kept = p.m.min(dp);
        (dp, second, select_first, kept, pick(dp, kept))
    };
    Ok(KacJl {
        params: *p,
        intermediate_dim,
        kept,
        first,
        second,
        select_first,
        select_second,
        two_phase: !cfg.first_phase_only,
        scale: (p.d as f64 / kept as f64).sqrt(),
    })
}

impl KacJl {
    pub fn params(&self) -> &JlParams {
        &self.params
    }

    pub fn intermediate_dim(&self) -> usize {
        self.intermediate_dim
    }

    pub fn first_walk(&self) -> &KacWalk {
        &self.first
    }

    pub fn second_walk(&self) -> Option<&KacWalk> {
        self.second.as_ref()
    }

    /// Output coordinates that carry signal; the rest are zero padding.
    pub fn kept_dim(&self) -> usize {
        self.kept
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let rotated = self.first.apply(x)?;
        let mut picked: Vec<f64> = self.select_first.iter().map(|&i| rotated[i]).collect();
        if self.two_phase {
            if let Some(w) = &self.second {
                w.apply_in_place(&mut picked)?;
            }
            picked = self.select_second.iter().map(|&i| picked[i]).collect();
        }
        let mut y = vec![0.0; self.params.m];
        y.iter_mut().zip(&picked).for_each(|(o, v)| *o = v * self.scale);
        Ok(y)
    }
}
