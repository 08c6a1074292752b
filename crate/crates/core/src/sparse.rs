//! Sparse JL constructions and the Feature Hashing ν-threshold.
//!
//! A [`SparseTransform`] stores, for every column, the rows of its nonzero
//! entries and their signs. Entries have magnitude `1/√s`, applied at
//! evaluation time.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, JlError, Result};
use crate::hashing::{PolyHash, SignHash, MERSENNE_61};
use crate::params::JlParams;
use crate::seed::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SparseKind {
    FeatureHashing,
    Block { s: usize },
    Graph { s: usize },
    Dks { s: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseTransform {
    kind: SparseKind,
    params: JlParams,
    /// Output dimension; exceeds `params.m` only for block padding.
    target_dim: usize,
    /// Nonzeros per stored column.
    per_column: usize,
    /// `per_column` rows per stored column, column-major.
    rows: Vec<u32>,
    signs: Vec<i8>,
}

/// Default column sparsity `⌈ε⁻¹ ln(1/δ)⌉`, clamped to `[1, m]`.
pub fn default_sparsity(eps: f64, delta: f64, m: usize) -> usize {
    let s = ((1.0 / delta).ln() / eps).ceil();
    if s.is_nan() || s < 1.0 {
        1
    } else {
        (s as usize).min(m.max(1))
    }
}

fn check_index_space(cols: usize) -> Result<()> {
    if cols as u64 >= MERSENNE_61 {
        return Err(JlError::param("source dimension exceeds the hash key space"));
    }
    if cols > u32::MAX as usize {
        return Err(JlError::param("source dimension too large"));
    }
    Ok(())
}

/// Feature-hashes `cols` keys into `m` rows: 4-wise bucket and
/// sign hashes, seeded from `derive_seed(seed, 0)` and `derive_seed(seed, 1)`.
fn hashed_columns(cols: usize, m: usize, seed: u64) -> Result<(Vec<u32>, Vec<i8>)> {
    check_index_space(cols)?;
    let bucket = PolyHash::new(4, m as u64, derive_seed(seed, 0))?;
    let sign = SignHash::new(4, derive_seed(seed, 1))?;
    let rows = (0..cols as u64).map(|i| bucket.hash(i) as u32).collect();
    let signs = (0..cols as u64).map(|i| sign.sign(i) as i8).collect();
    Ok((rows, signs))
}

pub fn feature_hashing_new(p: &JlParams) -> Result<SparseTransform> {
    let (rows, signs) = hashed_columns(p.d, p.m, p.seed)?;
    Ok(SparseTransform {
        kind: SparseKind::FeatureHashing,
        params: *p,
        target_dim: p.m,
        per_column: 1,
        rows,
        signs,
    })
}

/// One nonzero in each of `s` consecutive row ranges. When `s ∤ m` the output
/// dimension is rounded up to the next multiple of `s`.
pub fn block_new(p: &JlParams, s: usize) -> Result<SparseTransform> {
    if s == 0 || s > p.m {
        return Err(JlError::param(format!("block sparsity must lie in [1, m = {}], got {s}", p.m)));
    }
    check_index_space(p.d)?;
    let target_dim = p.m.div_ceil(s) * s;
    let block_len = target_dim / s;
    let mut rng = rng_from_seed(p.seed);
    let mut rows = Vec::with_capacity(p.d * s);
    let mut signs = Vec::with_capacity(p.d * s);
    for _ in 0..p.d {
        for b in 0..s {
            rows.push((b * block_len + rng.random_range(0..block_len)) as u32);
            signs.push(if rng.random::<bool>() { 1 } else { -1 });
        }
    }
    Ok(SparseTransform { kind: SparseKind::Block { s }, params: *p, target_dim, per_column: s, rows, signs })
}

/// `s` distinct rows per column, sampled without replacement.
pub fn graph_new(p: &JlParams, s: usize) -> Result<SparseTransform> {
    if s == 0 || s > p.m {
        return Err(JlError::param(format!("graph sparsity must lie in [1, m = {}], got {s}", p.m)));
    }
    check_index_space(p.d)?;
    let mut rng = rng_from_seed(p.seed);
    let mut rows = Vec::with_capacity(p.d * s);
    let mut signs = Vec::with_capacity(p.d * s);
    for _ in 0..p.d {
        for r in sample(&mut rng, p.m, s) {
            rows.push(r as u32);
            signs.push(if rng.random::<bool>() { 1 } else { -1 });
        }
    }
    Ok(SparseTransform {
        kind: SparseKind::Graph { s },
        params: *p,
        target_dim: p.m,
        per_column: s,
        rows,
        signs,
    })
}

/// Feature Hashing over the duplicated dimension `s·d`. Column `i`'s copies
/// are the keys `i·s .. i·s + s`; their rows may collide.
pub fn dks_new(p: &JlParams, s: usize) -> Result<SparseTransform> {
    if s == 0 {
        return Err(JlError::param("DKS sparsity must be >= 1"));
    }
    let cols = p.d.checked_mul(s).ok_or_else(|| JlError::param("s·d overflows"))?;
    let (rows, signs) = hashed_columns(cols, p.m, p.seed)?;
    Ok(SparseTransform {
        kind: SparseKind::Dks { s },
        params: *p,
        target_dim: p.m,
        per_column: 1,
        rows,
        signs,
    })
}

/// Repeats every entry `s` times and scales by `1/√s`; the norm is preserved.
pub fn duplicate_scale(x: &[f64], s: usize) -> Vec<f64> {
    let scale = 1.0 / (s as f64).sqrt();
    x.iter().flat_map(|&v| std::iter::repeat_n(v * scale, s)).collect()
}

impl SparseTransform {
    pub fn kind(&self) -> SparseKind {
        self.kind
    }

    pub fn params(&self) -> &JlParams {
        &self.params
    }

    pub fn source_dim(&self) -> usize {
        self.params.d
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// Column sparsity `s` (1 for Feature Hashing).
    pub fn sparsity(&self) -> usize {
        match self.kind {
            SparseKind::FeatureHashing => 1,
            SparseKind::Block { s } | SparseKind::Graph { s } | SparseKind::Dks { s } => s,
        }
    }

    /// Number of stored columns: `d`, or `s·d` for DKS.
    pub fn stored_columns(&self) -> usize {
        self.rows.len() / self.per_column
    }

    /// Rows and signs of stored column `j`.
    pub fn column(&self, j: usize) -> (&[u32], &[i8]) {
        let r = j * self.per_column..(j + 1) * self.per_column;
        (&self.rows[r.clone()], &self.signs[r])
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.params.d, x.len())?;
        match self.kind {
            SparseKind::Dks { s } => self.hash_columns(&duplicate_scale(x, s), 1.0),
            _ => {
                let scale = 1.0 / (self.per_column as f64).sqrt();
                self.hash_columns(x, scale)
            }
        }
    }

    /// Feature-hashing pass over the stored columns; for DKS this is the
    /// `s·d`-dimensional hash applied to an already duplicated vector.
    pub fn hash_columns(&self, x: &[f64], scale: f64) -> Result<Vec<f64>> {
        check_dim(self.stored_columns(), x.len())?;
        let mut y = vec![0.0; self.target_dim];
        for (j, &v) in x.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let (rows, signs) = self.column(j);
            let v = v * scale;
            for (&r, &sg) in rows.iter().zip(signs) {
                y[r as usize] += sg as f64 * v;
            }
        }
        Ok(y)
    }
}

/// Constants of the Feature Hashing ν-threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuThresholdConfig {
    pub c: f64,
    pub d: f64,
    pub lead: f64,
}

impl Default for NuThresholdConfig {
    fn default() -> Self {
        Self { c: 3.0, d: 0.5, lead: 1.0 }
    }
}

impl NuThresholdConfig {
    pub fn new(c: f64, d: f64, lead: f64) -> Result<Self> {
        if !(d > 0.0 && c >= d && lead > 0.0 && c.is_finite() && lead.is_finite()) {
            return Err(JlError::param("need C >= D > 0 and lead > 0"));
        }
        Ok(Self { c, d, lead })
    }
}

/// Largest `ℓ∞/ℓ₂` ratio for which Feature Hashing into `m` rows is a JLD at
/// `(ε, δ)`, with the unknown constants taken from `cfg`. Logarithms are base 2.
///
/// * `m ≥ 2/(ε²δ)` → 1.
/// * `m < D·lg(1/δ)/ε²` → 0.
/// * otherwise `lead·√ε·min{ lg(εm/L)/L, √(lg(ε²m/L)/L) }` with `L = lg(1/δ)`,
///   clamped to `[0, 1]`.
pub fn nu_fh(m: usize, eps: f64, delta: f64, cfg: &NuThresholdConfig) -> f64 {
    let m = m as f64;
    let l = (1.0 / delta).log2();
    if m >= 2.0 / (eps * eps * delta) {
        return 1.0;
    }
    if m < cfg.d * l / (eps * eps) {
        return 0.0;
    }
    let first = (eps * m / l).log2() / l;
    let second = ((eps * eps * m / l).log2() / l).max(0.0).sqrt();
    let nu = cfg.lead * eps.sqrt() * first.min(second);
    nu.clamp(0.0, 1.0)
}

/// Minimum DKS column sparsity `⌈lead·ν²_DKS/ν²_FH⌉`, clamped to `[1, m]`.
pub fn dks_sparsity(nu_dks: f64, nu_fh: f64, lead: f64, m: usize) -> Result<usize> {
    if nu_fh <= 0.0 {
        return Err(JlError::domain("nu_FH = 0: Feature Hashing is insufficient at any sparsity"));
    }
    if !(nu_fh <= nu_dks && nu_dks <= 1.0) {
        return Err(JlError::param("need 0 < nu_FH <= nu_DKS <= 1"));
    }
    let s = (lead * nu_dks * nu_dks / (nu_fh * nu_fh)).ceil();
    Ok((s.max(1.0) as usize).clamp(1, m.max(1)))
}

/// Unit vector with `k` leading entries `1/√k`.
pub fn fh_hard_instance(k: usize, d: usize) -> Result<Vec<f64>> {
    if k == 0 || k > d {
        return Err(JlError::param(format!("need 1 <= k <= d, got k = {k}, d = {d}")));
    }
    let v = 1.0 / (k as f64).sqrt();
    let mut x = vec![0.0; d];
    x[..k].iter_mut().for_each(|e| *e = v);
    Ok(x)
}

/// `‖x‖∞ / ‖x‖₂`.
pub fn linf_l2_ratio(x: &[f64]) -> f64 {
    let inf = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let l2 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if l2 == 0.0 {
        0.0
    } else {
        inf / l2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn params(d: usize, m: usize, seed: u64) -> JlParams {
        JlParams::new(d, m, 0.25, 0.05, seed).unwrap()
    }

    fn sq(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum()
    }

    #[test]
    fn fh_one_nonzero_per_column() {
        let t = feature_hashing_new(&params(500, 17, 3)).unwrap();
        assert_eq!(t.stored_columns(), 500);
        for j in 0..500 {
            let (rows, signs) = t.column(j);
            assert_eq!(rows.len(), 1);
            assert!(rows[0] < 17);
            assert_eq!(signs[0].abs(), 1);
        }
        assert_eq!(t, feature_hashing_new(&params(500, 17, 3)).unwrap());
    }

    #[test]
    fn fh_row_histogram() {
        let d = 100_000;
        let m = 16;
        let t = feature_hashing_new(&params(d, m, 21)).unwrap();
        let mut counts = vec![0usize; m];
        for j in 0..d {
            counts[t.column(j).0[0] as usize] += 1;
        }
        let p = 1.0 / m as f64;
        let sigma = (d as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - d as f64 * p).abs() <= 3.0 * sigma, "count {c}");
        }
    }

    #[test]
    fn block_structure() {
        let t = block_new(&params(300, 20, 4), 5).unwrap();
        assert_eq!(t.target_dim(), 20);
        for j in 0..300 {
            let (rows, _) = t.column(j);
            assert_eq!(rows.len(), 5);
            for (b, &r) in rows.iter().enumerate() {
                assert_eq!(r as usize / 4, b);
            }
        }
    }

    #[test]
    fn block_pads_m() {
        let t = block_new(&params(10, 473, 4), 12).unwrap();
        assert_eq!(t.target_dim(), 480);
        assert!(block_new(&params(10, 4, 4), 5).is_err());
        assert!(block_new(&params(10, 4, 4), 0).is_err());
    }

    #[test]
    fn block_s_equals_m_is_dense() {
        let m = 8;
        let t = block_new(&params(30, m, 9), m).unwrap();
        for j in 0..30 {
            let rows: Vec<u32> = t.column(j).0.to_vec();
            assert_eq!(rows, (0..m as u32).collect::<Vec<_>>());
        }
        let y = t
            .apply(&{
                let mut e = vec![0.0; 30];
                e[3] = 1.0;
                e
            })
            .unwrap();
        let v = 1.0 / (m as f64).sqrt();
        assert!(y.iter().all(|a| (a.abs() - v).abs() < 1e-15));
    }

    #[test]
    fn block_s_one_matches_fh_distribution() {
        let m = 8;
        let d = 40_000;
        let t = block_new(&params(d, m, 31), 1).unwrap();
        let mut counts = vec![0usize; m];
        for j in 0..d {
            counts[t.column(j).0[0] as usize] += 1;
        }
        let p = 1.0 / m as f64;
        let sigma = (d as f64 * p * (1.0 - p)).sqrt();
        assert!(counts.iter().all(|&c| (c as f64 - d as f64 * p).abs() <= 4.0 * sigma));
    }

    #[test]
    fn graph_distinct_rows() {
        let t = graph_new(&params(200, 30, 5), 7).unwrap();
        for j in 0..200 {
            let rows: HashSet<u32> = t.column(j).0.iter().copied().collect();
            assert_eq!(rows.len(), 7);
        }
        let full = graph_new(&params(50, 6, 5), 6).unwrap();
        for j in 0..50 {
            let mut rows = full.column(j).0.to_vec();
            rows.sort_unstable();
            assert_eq!(rows, vec![0, 1, 2, 3, 4, 5]);
        }
        assert!(graph_new(&params(5, 3, 1), 4).is_err());
    }

    #[test]
    fn graph_row_inclusion_rate() {
        let (d, m, s) = (10_000, 20, 5);
        let t = graph_new(&params(d, m, 55), s).unwrap();
        let mut counts = vec![0usize; m];
        for j in 0..d {
            for &r in t.column(j).0 {
                counts[r as usize] += 1;
            }
        }
        let p = s as f64 / m as f64;
        let sigma = (d as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - d as f64 * p).abs() <= 3.0 * sigma, "count {c}");
        }
    }

    #[test]
    fn duplicate_scale_examples() {
        let out = duplicate_scale(&[3.0, 4.0], 2);
        let r = 1.0 / 2f64.sqrt();
        assert_eq!(out, vec![3.0 * r, 3.0 * r, 4.0 * r, 4.0 * r]);
        assert!((sq(&out) - 25.0).abs() < 1e-12);
        assert_eq!(duplicate_scale(&[1.5, -2.0], 1), vec![1.5, -2.0]);
        let x = [0.3, -1.2, 0.5, 2.0];
        let ratio = linf_l2_ratio(&duplicate_scale(&x, 9));
        assert!((ratio - linf_l2_ratio(&x) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn dks_is_fh_of_duplicate() {
        let s = 4;
        let p = params(50, 32, 8);
        let t = dks_new(&p, s).unwrap();
        assert_eq!(t.stored_columns(), 200);
        let mut rng = rng_from_seed(1);
        for _ in 0..100 {
            let x: Vec<f64> = (0..50).map(|_| rng.random_range(-1.0..1.0)).collect();
            let direct = t.apply(&x).unwrap();
            let composed = t.hash_columns(&duplicate_scale(&x, s), 1.0).unwrap();
            assert_eq!(direct, composed);
        }
    }

    #[test]
    fn dks_s_one_equals_fh() {
        let p = params(64, 16, 12);
        let dks = dks_new(&p, 1).unwrap();
        let fh = feature_hashing_new(&p).unwrap();
        for j in 0..64 {
            assert_eq!(dks.column(j), fh.column(j));
        }
    }

    #[test]
    fn basis_vectors_keep_unit_norm() {
        let p = params(40, 24, 2);
        let transforms = [
            feature_hashing_new(&p).unwrap(),
            block_new(&p, 6).unwrap(),
            graph_new(&p, 6).unwrap(),
            dks_new(&p, 1).unwrap(),
        ];
        for t in &transforms {
            for i in 0..40 {
                let mut e = vec![0.0; 40];
                e[i] = 1.0;
                let y = t.apply(&e).unwrap();
                assert!((sq(&y) - 1.0).abs() < 1e-12, "{:?}", t.kind());
            }
            assert!(t.apply(&[0.0; 40]).unwrap().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn linearity() {
        let p = params(30, 12, 6);
        let t = graph_new(&p, 3).unwrap();
        let x: Vec<f64> = (0..30).map(|i| (i as f64).sin()).collect();
        let y: Vec<f64> = (0..30).map(|i| (i as f64).cos()).collect();
        let combo: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 2.0 * a - 0.5 * b).collect();
        let (fx, fy, fc) = (t.apply(&x).unwrap(), t.apply(&y).unwrap(), t.apply(&combo).unwrap());
        for i in 0..12 {
            assert!((fc[i] - (2.0 * fx[i] - 0.5 * fy[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn nu_fh_branches() {
        let cfg = NuThresholdConfig::default();
        let m = (2.0f64 / (0.25 * 0.5)).ceil() as usize;
        assert_eq!(nu_fh(m, 0.5, 0.5, &cfg), 1.0);
        let cfg_d1 = NuThresholdConfig::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(nu_fh(1, 0.01, 0.01, &cfg_d1), 0.0);
    }

    #[test]
    fn nu_fh_middle_increasing() {
        let cfg = NuThresholdConfig::default();
        let (eps, delta) = (0.1, 0.01);
        // Middle branch: C·lg(100)/ε² ≈ 1993 ≤ m < 2/(ε²δ) = 20000.
        let grid = [2000, 3000, 5000, 8000, 12000, 19000];
        let vals: Vec<f64> = grid.iter().map(|&m| nu_fh(m, eps, delta, &cfg)).collect();
        for w in vals.windows(2) {
            assert!(w[1] > w[0], "{vals:?}");
        }
        assert!(vals.iter().all(|&v| v > 0.0 && v < 1.0));
    }

    #[test]
    fn dks_sparsity_examples() {
        assert_eq!(dks_sparsity(0.3, 0.3, 2.5, 100).unwrap(), 3);
        assert_eq!(dks_sparsity(0.5, 0.25, 1.0, 100).unwrap(), 4);
        assert_eq!(dks_sparsity(1.0, 0.01, 1.0, 64).unwrap(), 64);
        assert!(matches!(dks_sparsity(0.5, 0.0, 1.0, 10), Err(JlError::Domain(_))));
        assert!(dks_sparsity(0.2, 0.5, 1.0, 10).is_err());
    }

    #[test]
    fn hard_instance_shape() {
        let x = fh_hard_instance(4, 8).unwrap();
        assert_eq!(x, vec![0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0]);
        let e1 = fh_hard_instance(1, 5).unwrap();
        assert_eq!(e1, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        let u = fh_hard_instance(16, 16).unwrap();
        assert!((sq(&u) - 1.0).abs() < 1e-12);
        assert!((linf_l2_ratio(&u) - 0.25).abs() < 1e-12);
        assert!(fh_hard_instance(9, 8).is_err());
        assert!(fh_hard_instance(0, 8).is_err());
    }
}
