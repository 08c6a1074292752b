use serde::{Deserialize, Serialize};

use super::{add_tables, Sketch, SketchConfig, SketchShape, TurnstileUpdate};
use crate::error::Result;
use crate::hashing::{PolyHash, SignHash};
use crate::seed::{derive_seed, rng_from_seed};
use crate::stats::median;

/// `K` rows of `w` buckets; each key lands in one bucket per row with a sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountSketch {
    shape: SketchShape,
    buckets: Vec<PolyHash>,
    signs: Vec<SignHash>,
    table: Vec<f64>,
}

impl CountSketch {
    pub fn new(d: u64, eps: f64, delta: f64, seed: u64) -> Result<Self> {
        Self::with_config(d, eps, delta, seed, &SketchConfig::default())
    }

    /// Bucket hashes (2-wise) from `derive_seed(seed, 0)`, sign hashes
    /// (4-wise) from `derive_seed(seed, 1)`.
    pub fn with_config(d: u64, eps: f64, delta: f64, seed: u64, cfg: &SketchConfig) -> Result<Self> {
        let shape = SketchShape::new(d, eps, delta, seed, cfg)?;
        let mut brng = rng_from_seed(derive_seed(seed, 0));
        let mut srng = rng_from_seed(derive_seed(seed, 1));
        let buckets = (0..shape.reps)
            .map(|_| PolyHash::from_rng(2, shape.width as u64, &mut brng))
            .collect::<Result<Vec<_>>>()?;
        let signs = (0..shape.reps).map(|_| SignHash::from_rng(4, &mut srng)).collect::<Result<Vec<_>>>()?;
        Ok(Self { table: vec![0.0; shape.reps * shape.width], shape, buckets, signs })
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Bucket of key `i` in repetition `r`.
    pub fn bucket(&self, r: usize, i: u64) -> usize {
        self.buckets[r].hash(i) as usize
    }

    /// Sign of key `i` in repetition `r`.
    pub fn sign(&self, r: usize, i: u64) -> f64 {
        self.signs[r].sign(i)
    }

    /// `median_r σ_r(i)·table[r][h_r(i)]`.
    pub fn point_query(&self, i: u64) -> Result<f64> {
        self.shape.check_index(i)?;
        Ok(odd_median(&mut self.point_estimates(i)))
    }

    /// Adds `u` and returns the new point estimate of `u.index`, hashing the
    /// key once per repetition.
    pub fn update_and_query(&mut self, u: TurnstileUpdate) -> Result<f64> {
        self.shape.check_index(u.index)?;
        let w = self.shape.width;
        let v = u.value as f64;
        let mut est = Vec::with_capacity(self.shape.reps);
        for r in 0..self.shape.reps {
            let cell = r * w + self.bucket(r, u.index);
            let sign = self.sign(r, u.index);
            self.table[cell] += sign * v;
            est.push(sign * self.table[cell]);
        }
        Ok(odd_median(&mut est))
    }

    fn point_estimates(&self, i: u64) -> Vec<f64> {
        let w = self.shape.width;
        (0..self.shape.reps).map(|r| self.sign(r, i) * self.table[r * w + self.bucket(r, i)]).collect()
    }
}

impl Sketch for CountSketch {
    fn shape(&self) -> &SketchShape {
        &self.shape
    }

    fn update(&mut self, u: TurnstileUpdate) -> Result<()> {
        self.shape.check_index(u.index)?;
        let w = self.shape.width;
        let v = u.value as f64;
        for r in 0..self.shape.reps {
            let b = self.bucket(r, u.index);
            self.table[r * w + b] += self.sign(r, u.index) * v;
        }
        Ok(())
    }

    fn f2_query(&self) -> f64 {
        median(&self.repetition_estimates())
    }

    fn repetition_estimates(&self) -> Vec<f64> {
        self.table.chunks(self.shape.width).map(|row| row.iter().map(|a| a * a).sum()).collect()
    }

    fn merge(&mut self, other: &Self) -> Result<()> {
        self.shape.check_compatible(&other.shape)?;
        add_tables(&mut self.table, &other.table);
        Ok(())
    }
}

/// Median of an odd-length buffer, reordering it in place.
fn odd_median(v: &mut [f64]) -> f64 {
    let mid = v.len() / 2;
    *v.select_nth_unstable_by(mid, f64::total_cmp).1
}
