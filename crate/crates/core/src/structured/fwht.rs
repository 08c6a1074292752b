use crate::error::{JlError, Result};

/// In-place unnormalised Walsh–Hadamard transform in Sylvester order,
/// `H_{ij} = (−1)^{popcount(i & j)}`.
pub fn fwht_in_place(x: &mut [f64]) -> Result<()> {
    let n = x.len();
    if !n.is_power_of_two() {
        return Err(JlError::param(format!("Walsh-Hadamard length must be a power of two, got {n}")));
    }
    let mut h = 1;
    while h < n {
        for block in x.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        h *= 2;
    }
    Ok(())
}

pub fn fwht(x: &[f64]) -> Result<Vec<f64>> {
    let mut y = x.to_vec();
    fwht_in_place(&mut y)?;
    Ok(y)
}
