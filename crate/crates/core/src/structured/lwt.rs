//! Lean Walsh transforms: Kronecker powers of a small seed matrix.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dense::{rademacher_new, DenseTransform};
use crate::error::{check_dim, JlError, Result};
use crate::params::JlParams;
use crate::seed::{derive_seed, rng_from_seed};

const SEED_TOL: f64 = 1e-9;

/// An `r × c` matrix (`r < c`) with unit-norm columns and pairwise orthogonal
/// rows of equal norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedMatrix {
    r: usize,
    c: usize,
    /// Row-major.
    entries: Vec<f64>,
}

impl SeedMatrix {
    pub fn new(r: usize, c: usize, entries: Vec<f64>) -> Result<Self> {
        if r == 0 || r >= c {
            return Err(JlError::param(format!("seed matrix needs 0 < r < c, got {r}x{c}")));
        }
        check_dim(r * c, entries.len())?;
        let s = Self { r, c, entries };
        for j in 0..c {
            let norm: f64 = (0..r).map(|i| s.get(i, j).powi(2)).sum();
            if (norm - 1.0).abs() > SEED_TOL {
                return Err(JlError::param(format!("seed column {j} has squared norm {norm}")));
            }
        }
        let row_norm = s.row_dot(0, 0);
        for i in 0..r {
            if (s.row_dot(i, i) - row_norm).abs() > SEED_TOL {
                return Err(JlError::param("seed rows must share one norm"));
            }
            for k in i + 1..r {
                if s.row_dot(i, k).abs() > SEED_TOL {
                    return Err(JlError::param(format!("seed rows {i} and {k} are not orthogonal")));
                }
            }
        }
        Ok(s)
    }

    /// First `r` rows of the `c × c` Sylvester Hadamard matrix, scaled by
    /// `1/√r`.
    pub fn partial_hadamard(r: usize, c: usize) -> Result<Self> {
        if !c.is_power_of_two() {
            return Err(JlError::param("Hadamard seed width must be a power of two"));
        }
        let scale = 1.0 / (r as f64).sqrt();
        let entries = (0..r)
            .flat_map(|i| (0..c).map(move |j| if (i & j).count_ones() % 2 == 0 { scale } else { -scale }))
            .collect();
        Self::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.r
    }

    pub fn cols(&self) -> usize {
        self.c
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.c + j]
    }

    fn row_dot(&self, a: usize, b: usize) -> f64 {
        (0..self.c).map(|j| self.get(a, j) * self.get(b, j)).sum()
    }

    /// A vector orthogonal to every row, with `‖z‖∞ = 1` and a positive first
    /// nonzero entry. Read off the reduced row echelon form with the first
    /// free variable set to 1.
    pub fn null_vector(&self) -> Vec<f64> {
        let (r, c) = (self.r, self.c);
        let mut a = self.entries.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..c {
            if row == r {
                break;
            }
            let best =
                (row..r).max_by(|&x, &y| a[x * c + col].abs().total_cmp(&a[y * c + col].abs())).unwrap();
            if a[best * c + col].abs() < 1e-12 {
                continue;
            }
            for j in 0..c {
                a.swap(row * c + j, best * c + j);
            }
            let p = a[row * c + col];
            for j in 0..c {
                a[row * c + j] /= p;
            }
            for i in 0..r {
                if i != row {
                    let f = a[i * c + col];
                    if f != 0.0 {
                        for j in 0..c {
                            a[i * c + j] -= f * a[row * c + j];
                        }
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let free = (0..c).find(|j| !pivots.contains(j)).expect("r < c leaves a free column");
        let mut z = vec![0.0; c];
        z[free] = 1.0;
        for (i, &pc) in pivots.iter().enumerate() {
            let v = -a[i * c + free];
            z[pc] = if v.abs() < 1e-12 { 0.0 } else { v };
        }
        let inf = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let lead = z.iter().copied().find(|v| *v != 0.0).unwrap_or(1.0);
        let scale = lead.signum() / inf;
        z.iter_mut().for_each(|v| *v *= scale);
        z
    }
}

/// `A_l·x` for `A_l = A_1^{⊗l}`, with `x.len() = c^l` and output length `r^l`.
///
/// Uses `A_l = A_1 ⊗ A_{l−1}`: split `x` into `c` stripes, transform each
/// with `A_{l−1}`, then combine the stripes with `A_1`.
pub fn lwt_apply(seed: &SeedMatrix, l: u32, x: &[f64]) -> Result<Vec<f64>> {
    if l == 0 {
        return Err(JlError::param("lean Walsh level must be >= 1"));
    }
    check_dim(seed.c.pow(l), x.len())?;
    Ok(lwt_rec(seed, l, x))
}

fn lwt_rec(seed: &SeedMatrix, l: u32, x: &[f64]) -> Vec<f64> {
    let (r, c) = (seed.r, seed.c);
    if l == 1 {
        return (0..r).map(|i| (0..c).map(|j| seed.get(i, j) * x[j]).sum()).collect();
    }
    let stripe = x.len() / c;
    let parts: Vec<Vec<f64>> = x.chunks_exact(stripe).map(|s| lwt_rec(seed, l - 1, s)).collect();
    let out_stripe = parts[0].len();
    let mut y = vec![0.0; r * out_stripe];
    for (i, out) in y.chunks_exact_mut(out_stripe).enumerate() {
        for (j, part) in parts.iter().enumerate() {
            let a = seed.get(i, j);
            if a == 0.0 {
                continue;
            }
            out.iter_mut().zip(part).for_each(|(o, p)| *o += a * p);
        }
    }
    y
}

/// Inner transform `G` applied after the lean Walsh stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LwtInner {
    #[default]
    Rademacher,
    Gaussian,
}

/// `f(x) = G·A_l·D·x` with `x` zero-padded to `c^l`.
#[derive(Debug, Clone)]
pub struct LwtJl {
    params: JlParams,
    seed_matrix: SeedMatrix,
    level: u32,
    signs: Vec<f64>,
    inner: DenseTransform,
}

/// Smallest `l ≥ 1` with `c^l ≥ d`.
pub fn lwt_level(c: usize, d: usize) -> u32 {
    let mut l = 1;
    let mut span = c;
    while span < d {
        span *= c;
        l += 1;
    }
    l
}

/// `D` comes from `derive_seed(seed, 0)`, `G` from `derive_seed(seed, 1)`.
pub fn lwtjl_new(p: &JlParams, seed_matrix: SeedMatrix, inner: LwtInner) -> Result<LwtJl> {
    let level = lwt_level(seed_matrix.c, p.d);
    let padded = seed_matrix.c.pow(level);
    let reduced = seed_matrix.r.pow(level);
    if p.m > reduced {
        return Err(JlError::param(format!(
            "target dimension {} exceeds the lean Walsh output r^l = {reduced}",
            p.m
        )));
    }
    let mut rng = rng_from_seed(derive_seed(p.seed, 0));
    let signs = (0..padded).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let inner_params = JlParams::new(reduced, p.m, p.eps, p.delta, derive_seed(p.seed, 1))?;
    let inner = match inner {
        LwtInner::Rademacher => rademacher_new(&inner_params),
        LwtInner::Gaussian => crate::dense::gaussian_new(&inner_params),
    };
    Ok(LwtJl { params: *p, seed_matrix, level, signs, inner })
}

impl LwtJl {
    pub fn params(&self) -> &JlParams {
        &self.params
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn seed_matrix(&self) -> &SeedMatrix {
        &self.seed_matrix
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn inner(&self) -> &DenseTransform {
        &self.inner
    }

    /// `D·x` with zero padding to `c^l`.
    pub fn sign_pad(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.params.d, x.len())?;
        let mut v = vec![0.0; self.signs.len()];
        v.iter_mut().zip(x.iter().zip(&self.signs)).for_each(|(o, (a, s))| *o = a * s);
        Ok(v)
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let dx = self.sign_pad(x)?;
        let ax = lwt_apply(&self.seed_matrix, self.level, &dx)?;
        self.inner.apply(&ax)
    }
}

/// Sparse vector collapsed to zero by `A_l` whenever `D` fixes it: `k` copies
/// of the seed's null vector followed by zeros, `k = ⌊lg(1/δ)/c − 1⌋`.
pub fn lwt_hard_instance(seed: &SeedMatrix, delta: f64, d: usize) -> Result<Vec<f64>> {
    crate::params::check_unit_interval("delta", delta)?;
    let c = seed.c;
    let k = ((1.0 / delta).log2() / c as f64 - 1.0).floor();
    if k < 1.0 {
        return Err(JlError::param(format!("delta = {delta} too large: copy count k = {k} < 1")));
    }
    let k = k as usize;
    if c * k > d {
        return Err(JlError::param(format!("{k} copies of width {c} do not fit in d = {d}")));
    }
    let z = seed.null_vector();
    let mut x = vec![0.0; d];
    for copy in x[..c * k].chunks_exact_mut(c) {
        copy.copy_from_slice(&z);
    }
    Ok(x)
}
