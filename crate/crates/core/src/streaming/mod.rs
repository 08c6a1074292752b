//! Linear sketches over turnstile streams.
//!
//! The stream defines `x = Σ_t v_t·e_{i_t}`. Both sketches are linear in `x`,
//! so shards can be sketched independently and merged by addition.

mod ams;
mod count_sketch;
mod topk;

use serde::{Deserialize, Serialize};

use crate::error::{JlError, Result};
use crate::params::check_unit_interval;

pub use ams::AmsSketch;
pub use count_sketch::CountSketch;
pub use topk::{topk_process, HeavyHitterHeap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TurnstileUpdate {
    pub index: u64,
    pub value: i64,
}

impl TurnstileUpdate {
    pub fn new(index: u64, value: i64) -> Self {
        Self { index, value }
    }
}

/// Width `w = ⌈width_const/ε²⌉` and repetitions `K` = smallest odd integer
/// `≥ ⌈reps_const·ln(1/δ)⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SketchConfig {
    pub width_const: f64,
    pub reps_const: f64,
}

impl Default for SketchConfig {
    fn default() -> Self {
        Self { width_const: 4.0, reps_const: 8.0 }
    }
}

impl SketchConfig {
    pub fn width(&self, eps: f64) -> usize {
        ((self.width_const / (eps * eps)).ceil() as usize).max(1)
    }

    pub fn reps(&self, delta: f64) -> usize {
        let k = ((self.reps_const * (1.0 / delta).ln()).ceil() as usize).max(1);
        k | 1
    }

    fn validate(&self) -> Result<()> {
        if !(self.width_const > 0.0 && self.width_const.is_finite())
            || !(self.reps_const > 0.0 && self.reps_const.is_finite())
        {
            return Err(JlError::param("sketch constants must be positive"));
        }
        Ok(())
    }
}

/// Shared shape of both sketches; merges require all fields equal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SketchShape {
    pub d: u64,
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
    pub width: usize,
    pub reps: usize,
}

impl SketchShape {
    fn new(d: u64, eps: f64, delta: f64, seed: u64, cfg: &SketchConfig) -> Result<Self> {
        if d == 0 {
            return Err(JlError::param("stream dimension must be >= 1"));
        }
        if d >= crate::hashing::MERSENNE_61 {
            return Err(JlError::param("stream dimension must be below 2^61 - 1"));
        }
        check_unit_interval("eps", eps)?;
        check_unit_interval("delta", delta)?;
        cfg.validate()?;
        Ok(Self { d, eps, delta, seed, width: cfg.width(eps), reps: cfg.reps(delta) })
    }

    fn check_index(&self, i: u64) -> Result<()> {
        if i >= self.d {
            return Err(JlError::domain(format!("index {i} outside [0, {})", self.d)));
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.d != other.d
            || self.width != other.width
            || self.reps != other.reps
            || self.seed != other.seed
        {
            return Err(JlError::IncompatibleSketch(format!(
                "(d, w, K, seed) = ({}, {}, {}, {}) vs ({}, {}, {}, {})",
                self.d, self.width, self.reps, self.seed, other.d, other.width, other.reps, other.seed
            )));
        }
        Ok(())
    }
}

/// Operations common to [`AmsSketch`] and [`CountSketch`].
pub trait Sketch: Sized + Clone {
    fn shape(&self) -> &SketchShape;
    fn update(&mut self, u: TurnstileUpdate) -> Result<()>;
    /// Median over repetitions of the per-repetition `‖x‖²` estimate.
    fn f2_query(&self) -> f64;
    /// The `K` per-repetition estimates, in repetition order.
    fn repetition_estimates(&self) -> Vec<f64>;
    fn merge(&mut self, other: &Self) -> Result<()>;

    fn update_all<I: IntoIterator<Item = TurnstileUpdate>>(&mut self, updates: I) -> Result<()> {
        updates.into_iter().try_for_each(|u| self.update(u))
    }
}

/// `a + b` as a new sketch.
pub fn sketch_merge<S: Sketch>(a: &S, b: &S) -> Result<S> {
    let mut out = a.clone();
    out.merge(b)?;
    Ok(out)
}

fn add_tables(dst: &mut [f64], src: &[f64]) {
    dst.iter_mut().zip(src).for_each(|(a, b)| *a += b);
}
