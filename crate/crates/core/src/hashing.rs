//! k-wise independent polynomial hashing over the Mersenne prime `2⁶¹ − 1`.
//!
//! A degree-`(k−1)` polynomial with coefficients uniform in `[0, p)` is a
//! k-wise independent family on `[0, p)`. Outputs are reduced modulo the
//! range `w`, which introduces a bias of order `w/p`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{JlError, Result};
use crate::seed::rng_from_seed;

pub const MERSENNE_61: u64 = (1 << 61) - 1;

#[inline]
fn reduce(x: u128) -> u64 {
    // x = hi·2⁶¹ + lo and 2⁶¹ ≡ 1 (mod p).
    let lo = (x as u64) & MERSENNE_61;
    let hi = (x >> 61) as u64;
    let mut r = lo + hi;
    r = (r & MERSENNE_61) + (r >> 61);
    if r >= MERSENNE_61 {
        r - MERSENNE_61
    } else {
        r
    }
}

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    reduce(a as u128 * b as u128)
}

/// `h(x) = ((a_{k−1} x^{k−1} + … + a_0) mod p) mod w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyHash {
    /// Highest degree first.
    coefficients: Vec<u64>,
    range: u64,
}

impl PolyHash {
    /// Draws a k-wise independent hash into `[0, w)` from `seed`.
    pub fn new(k: usize, w: u64, seed: u64) -> Result<Self> {
        Self::from_rng(k, w, &mut rng_from_seed(seed))
    }

    pub fn from_rng(k: usize, w: u64, rng: &mut ChaCha8Rng) -> Result<Self> {
        check_k(k)?;
        let coefficients = (0..k).map(|_| rng.random_range(0..MERSENNE_61)).collect();
        Self::from_coefficients(coefficients, w)
    }

    /// Coefficients are listed highest degree first: `[a₃, a₂, a₁, a₀]`.
    pub fn from_coefficients(coefficients: Vec<u64>, w: u64) -> Result<Self> {
        check_k(coefficients.len())?;
        if w == 0 {
            return Err(JlError::param("hash range must be >= 1"));
        }
        if coefficients.iter().any(|&a| a >= MERSENNE_61) {
            return Err(JlError::param("hash coefficients must be < 2^61 - 1"));
        }
        Ok(Self { coefficients, range: w })
    }

    pub fn k(&self) -> usize {
        self.coefficients.len()
    }

    pub fn range(&self) -> u64 {
        self.range
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn eval(&self, key: u64) -> Result<u64> {
        if key >= MERSENNE_61 {
            return Err(JlError::domain(format!("hash key {key} is not below 2^61 - 1")));
        }
        Ok(self.hash(key))
    }

    /// Evaluation without the key-range check; callers guarantee `key < p`.
    #[inline]
    pub(crate) fn hash(&self, key: u64) -> u64 {
        debug_assert!(key < MERSENNE_61);
        let (&lead, rest) = self.coefficients.split_first().expect("polynomial has k >= 2 coefficients");
        let mut acc = lead;
        for &a in rest {
            // both terms are below p < 2⁶¹, so the sum fits in u64
            acc = mul_mod(acc, key) + a;
            if acc >= MERSENNE_61 {
                acc -= MERSENNE_61;
            }
        }
        if self.range.is_power_of_two() {
            acc & (self.range - 1)
        } else {
            acc % self.range
        }
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 2 || k == 4 {
        Ok(())
    } else {
        Err(JlError::param(format!("only 2-wise and 4-wise families are supported, got k = {k}")))
    }
}

/// A ±1 hash: the low bit of a width-2 polynomial hash, mapped
/// `0 → −1`, `1 → +1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignHash {
    inner: PolyHash,
}

impl SignHash {
    pub fn new(k: usize, seed: u64) -> Result<Self> {
        Ok(Self { inner: PolyHash::new(k, 2, seed)? })
    }

    pub fn from_rng(k: usize, rng: &mut ChaCha8Rng) -> Result<Self> {
        Ok(Self { inner: PolyHash::from_rng(k, 2, rng)? })
    }

    /// Wraps a polynomial; its range is forced to 2.
    pub fn from_poly(inner: PolyHash) -> Self {
        Self { inner: PolyHash { range: 2, ..inner } }
    }

    pub fn eval(&self, key: u64) -> Result<i8> {
        self.inner.eval(key).map(to_sign)
    }

    #[inline]
    pub(crate) fn sign(&self, key: u64) -> f64 {
        if self.inner.hash(key) == 1 {
            1.0
        } else {
            -1.0
        }
    }
}

fn to_sign(bit: u64) -> i8 {
    2 * bit as i8 - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_matches_u128_mod() {
        let samples = [
            0u128,
            1,
            MERSENNE_61 as u128 - 1,
            MERSENNE_61 as u128,
            MERSENNE_61 as u128 + 5,
            (MERSENNE_61 as u128 - 1) * (MERSENNE_61 as u128 - 1),
            u64::MAX as u128 * 3,
        ];
        for x in samples {
            assert_eq!(reduce(x) as u128, x % MERSENNE_61 as u128, "x = {x}");
        }
    }

    #[test]
    fn same_seed_same_coefficients() {
        let a = PolyHash::new(4, 8, 99).unwrap();
        let b = PolyHash::new(4, 8, 99).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, PolyHash::new(4, 8, 100).unwrap());
    }

    #[test]
    fn outputs_in_range() {
        let h = PolyHash::new(4, 8, 3).unwrap();
        for key in 0..10_000 {
            assert!(h.eval(key).unwrap() < 8);
        }
        assert!(h.eval(MERSENNE_61 - 1).unwrap() < 8);
    }

    #[test]
    fn constant_polynomial() {
        let h = PolyHash::from_coefficients(vec![0, 0, 0, 13], 8).unwrap();
        for key in [0, 1, 77, 1 << 40] {
            assert_eq!(h.eval(key).unwrap(), 13 % 8);
        }
    }

    #[test]
    fn linear_identity() {
        let h = PolyHash::from_coefficients(vec![1, 0], MERSENNE_61).unwrap();
        for key in [0, 1, 12345, MERSENNE_61 - 1] {
            assert_eq!(h.eval(key).unwrap(), key);
        }
    }

    #[test]
    fn cubic_example() {
        let h = PolyHash::from_coefficients(vec![1, 2, 3, 4], MERSENNE_61).unwrap();
        assert_eq!(h.eval(5).unwrap(), 194);
        assert_eq!(h.eval(5).unwrap(), h.eval(5).unwrap());
    }

    #[test]
    fn cubic_matches_bigint_oracle() {
        let coeffs = [MERSENNE_61 - 2, 1 << 60, 987_654_321, MERSENNE_61 - 1];
        let h = PolyHash::from_coefficients(coeffs.to_vec(), MERSENNE_61).unwrap();
        let p = MERSENNE_61 as u128;
        for key in [2u64, 1 << 33, MERSENNE_61 - 1, 123_456_789_012] {
            let k = key as u128;
            let k2 = k * k % p;
            let k3 = k2 * k % p;
            let expect = (coeffs[0] as u128 * k3 % p
                + coeffs[1] as u128 * k2 % p
                + coeffs[2] as u128 * k % p
                + coeffs[3] as u128)
                % p;
            assert_eq!(h.eval(key).unwrap() as u128, expect);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(PolyHash::new(3, 8, 0), Err(JlError::InvalidParameter(_))));
        assert!(PolyHash::new(4, 0, 0).is_err());
        let h = PolyHash::new(2, 8, 0).unwrap();
        assert!(matches!(h.eval(MERSENNE_61), Err(JlError::Domain(_))));
    }

    #[test]
    fn constant_signs() {
        let neg = SignHash::from_poly(PolyHash::from_coefficients(vec![0, 0, 0, 0], 2).unwrap());
        let pos = SignHash::from_poly(PolyHash::from_coefficients(vec![0, 0, 0, 1], 2).unwrap());
        for key in 0..100 {
            assert_eq!(neg.eval(key).unwrap(), -1);
            assert_eq!(pos.eval(key).unwrap(), 1);
        }
    }

    #[test]
    fn sign_mean_near_zero() {
        let s = SignHash::new(4, 2024).unwrap();
        let mut rng = rng_from_seed(1);
        let n = 100_000;
        let total: i64 = (0..n).map(|_| s.eval(rng.random_range(0..MERSENNE_61)).unwrap() as i64).sum();
        assert!((total as f64 / n as f64).abs() < 0.02);
    }
}
