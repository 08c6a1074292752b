use serde::{Deserialize, Serialize};

use super::{add_tables, Sketch, SketchConfig, SketchShape, TurnstileUpdate};
use crate::error::Result;
use crate::hashing::SignHash;
use crate::seed::rng_from_seed;
use crate::stats::median;

/// `K` independent dense JL maps with 4-wise independent sign rows.
///
/// Accumulators hold `Σ_i σ_{r,b}(i)·x_i`; the `1/√w` normalisation is
/// applied at query time so integer streams stay exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmsSketch {
    shape: SketchShape,
    signs: Vec<SignHash>,
    acc: Vec<f64>,
}

impl AmsSketch {
    pub fn new(d: u64, eps: f64, delta: f64, seed: u64) -> Result<Self> {
        Self::with_config(d, eps, delta, seed, &SketchConfig::default())
    }

    /// Sign hashes are drawn row by row from one stream seeded with `seed`.
    pub fn with_config(d: u64, eps: f64, delta: f64, seed: u64, cfg: &SketchConfig) -> Result<Self> {
        let shape = SketchShape::new(d, eps, delta, seed, cfg)?;
        let cells = shape.width * shape.reps;
        let mut rng = rng_from_seed(seed);
        let signs = (0..cells).map(|_| SignHash::from_rng(4, &mut rng)).collect::<Result<Vec<_>>>()?;
        Ok(Self { shape, signs, acc: vec![0.0; cells] })
    }

    /// Raw accumulators, `K` rows of `w`.
    pub fn accumulators(&self) -> &[f64] {
        &self.acc
    }
}

impl Sketch for AmsSketch {
    fn shape(&self) -> &SketchShape {
        &self.shape
    }

    fn update(&mut self, u: TurnstileUpdate) -> Result<()> {
        self.shape.check_index(u.index)?;
        let v = u.value as f64;
        self.acc.iter_mut().zip(&self.signs).for_each(|(a, s)| *a += s.sign(u.index) * v);
        Ok(())
    }

    fn f2_query(&self) -> f64 {
        median(&self.repetition_estimates())
    }

    fn repetition_estimates(&self) -> Vec<f64> {
        let w = self.shape.width as f64;
        self.acc.chunks(self.shape.width).map(|row| row.iter().map(|a| a * a).sum::<f64>() / w).collect()
    }

    fn merge(&mut self, other: &Self) -> Result<()> {
        self.shape.check_compatible(&other.shape)?;
        add_tables(&mut self.acc, &other.acc);
        Ok(())
    }
}
