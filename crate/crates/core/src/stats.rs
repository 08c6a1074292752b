use serde::{Deserialize, Serialize};

/// Outcome of a batch of distortion trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionStats {
    pub trials: u64,
    /// Trials with `|‖f(x)‖² − ‖x‖²| > ε‖x‖²`.
    pub failures: u64,
    pub mean_sq_ratio: f64,
    pub failure_rate: f64,
    /// Normal-approximation binomial 95% half-width.
    pub ci95_halfwidth: f64,
}

impl DistortionStats {
    /// Aggregates per-trial ratios `‖f(x)‖²/‖x‖²`. The result depends only on
    /// the ratios and their order, never on how they were computed.
    pub fn from_ratios(ratios: &[f64], eps: f64) -> Self {
        let failures = ratios.iter().filter(|&&r| is_failure(r, eps)).count() as u64;
        let trials = ratios.len() as u64;
        let mean =
            if ratios.is_empty() { 0.0 } else { neumaier_sum(ratios.iter().copied()) / ratios.len() as f64 };
        Self::from_counts(trials, failures, mean)
    }

    pub fn from_counts(trials: u64, failures: u64, mean_sq_ratio: f64) -> Self {
        let failure_rate = if trials == 0 { 0.0 } else { failures as f64 / trials as f64 };
        let ci95_halfwidth = if trials == 0 {
            0.0
        } else {
            1.96 * (failure_rate * (1.0 - failure_rate) / trials as f64).sqrt()
        };
        Self { trials, failures, mean_sq_ratio, failure_rate, ci95_halfwidth }
    }
}

pub fn is_failure(ratio: f64, eps: f64) -> bool {
    (ratio - 1.0).abs() > eps
}

/// Largest `|‖f(x)−f(y)‖²/‖x−y‖² − 1|` over all pairs, where `embedded[i]`
/// is the image of `points[i]`. Pairs at distance zero count as exact when
/// their images coincide and as infinitely distorted otherwise.
pub fn worst_pair_distortion(points: &[Vec<f64>], embedded: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let orig = sq_dist(&points[i], &points[j]);
            let emb = sq_dist(&embedded[i], &embedded[j]);
            let dev = if orig == 0.0 {
                if emb == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (emb / orig - 1.0).abs()
            };
            worst = worst.max(dev);
        }
    }
    worst
}

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Compensated summation (Neumaier's variant of Kahan).
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Median of a non-empty slice; for odd lengths this is an element of the
/// input.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty slice");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
