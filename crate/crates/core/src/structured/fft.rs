use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{JlError, Result};

/// Circular convolution `(a ⊛ b)_i = Σ_k a_k b_{(i−k) mod n}` of two
/// equal power-of-two length vectors, via the FFT.
pub fn fft_circular_convolve(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(JlError::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let n = a.len();
    if !n.is_power_of_two() {
        return Err(JlError::param(format!("convolution length must be a power of two, got {n}")));
    }
    let plan = FftPlan::new(n);
    let mut fa = plan.forward_real(a);
    let fb = plan.forward_real(b);
    fa.iter_mut().zip(&fb).for_each(|(x, y)| *x *= y);
    Ok(plan.inverse_real(fa))
}

/// Forward/inverse plans of one length.
#[derive(Clone)]
pub(crate) struct FftPlan {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FftPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftPlan").field("len", &self.len).finish()
    }
}

impl FftPlan {
    pub(crate) fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { len, forward: planner.plan_fft_forward(len), inverse: planner.plan_fft_inverse(len) }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    /// Spectrum of `x` zero-padded to the plan length.
    pub(crate) fn forward_real(&self, x: &[f64]) -> Vec<Complex64> {
        debug_assert!(x.len() <= self.len);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len];
        buf.iter_mut().zip(x).for_each(|(c, &v)| *c = Complex64::new(v, 0.0));
        self.forward.process(&mut buf);
        buf
    }

    /// Real part of the normalised inverse transform.
    pub(crate) fn inverse_real(&self, mut spectrum: Vec<Complex64>) -> Vec<f64> {
        self.inverse.process(&mut spectrum);
        let scale = 1.0 / self.len as f64;
        spectrum.iter().map(|c| c.re * scale).collect()
    }
}
