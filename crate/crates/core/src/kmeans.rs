//! Lloyd's algorithm, the centroid and pairwise cost forms, and k-means on
//! JL-embedded data.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{JlError, Result};
use crate::params::{target_dim_fm, JlParams};
use crate::seed::{derive_seed, rng_from_seed};
use crate::stats::{sq_dist, worst_pair_distortion};
use crate::transform::{LinearEmbedding, TransformKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
    sizes: Vec<usize>,
}

impl Partition {
    pub fn new(assignment: Vec<usize>, k: usize) -> Result<Self> {
        let mut sizes = vec![0; k];
        for &c in &assignment {
            if c >= k {
                return Err(JlError::param(format!("cluster id {c} outside [0, {k})")));
            }
            sizes[c] += 1;
        }
        Ok(Self { assignment, k, sizes })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Cluster means; errors on an empty cluster.
    pub fn centroids(&self, points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        check_points(points)?;
        if points.len() != self.assignment.len() {
            return Err(JlError::DimensionMismatch { expected: self.assignment.len(), found: points.len() });
        }
        if let Some(c) = self.sizes.iter().position(|&s| s == 0) {
            return Err(JlError::domain(format!("cluster {c} is empty")));
        }
        let dim = points[0].len();
        let mut sums = vec![vec![0.0; dim]; self.k];
        for (p, &c) in points.iter().zip(&self.assignment) {
            sums[c].iter_mut().zip(p).for_each(|(s, v)| *s += v);
        }
        for (s, &n) in sums.iter_mut().zip(&self.sizes) {
            s.iter_mut().for_each(|v| *v /= n as f64);
        }
        Ok(sums)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub centers: Vec<Vec<f64>>,
    pub partition: Partition,
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Cost after every iteration.
    pub cost_history: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LloydConfig {
    pub max_iter: usize,
    pub rel_tol: f64,
}

impl Default for LloydConfig {
    fn default() -> Self {
        Self { max_iter: 100, rel_tol: 1e-9 }
    }
}

fn check_points(points: &[Vec<f64>]) -> Result<()> {
    let Some(first) = points.first() else {
        return Err(JlError::param("empty point set"));
    };
    for p in points {
        if p.len() != first.len() {
            return Err(JlError::DimensionMismatch { expected: first.len(), found: p.len() });
        }
    }
    Ok(())
}

/// `Σ_i Σ_{x∈X_i} ‖x − μ_i‖²`.
pub fn cost_centroid(points: &[Vec<f64>], partition: &Partition) -> Result<f64> {
    let centers = partition.centroids(points)?;
    Ok(points.iter().zip(partition.assignment()).map(|(p, &c)| sq_dist(p, &centers[c])).sum())
}

/// `Σ_i 1/(2|X_i|) Σ_{x,y∈X_i} ‖x − y‖²` over ordered pairs.
pub fn cost_pairwise(points: &[Vec<f64>], partition: &Partition) -> Result<f64> {
    check_points(points)?;
    if let Some(c) = partition.sizes().iter().position(|&s| s == 0) {
        return Err(JlError::domain(format!("cluster {c} is empty")));
    }
    let mut members = vec![Vec::new(); partition.k()];
    for (i, &c) in partition.assignment().iter().enumerate() {
        members[c].push(i);
    }
    Ok(members
        .iter()
        .map(|m| {
            let s: f64 = m
                .iter()
                .flat_map(|&a| m.iter().map(move |&b| (a, b)))
                .map(|(a, b)| sq_dist(&points[a], &points[b]))
                .sum();
            s / (2.0 * m.len() as f64)
        })
        .sum())
}

/// `Σ_{x,y∈X} ⟨x − μ, y − μ⟩` evaluated pair by pair.
pub fn centered_inner_product_sum(points: &[Vec<f64>]) -> Result<f64> {
    check_points(points)?;
    let n = points.len() as f64;
    let mut mu = vec![0.0; points[0].len()];
    for p in points {
        mu.iter_mut().zip(p).for_each(|(m, v)| *m += v / n);
    }
    let centered: Vec<Vec<f64>> =
        points.iter().map(|p| p.iter().zip(&mu).map(|(a, b)| a - b).collect()).collect();
    Ok(centered
        .iter()
        .flat_map(|a| centered.iter().map(move |b| (a, b)))
        .map(|(a, b)| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>())
        .sum())
}

fn nearest(p: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, center) in centers.iter().enumerate() {
        let dist = sq_dist(p, center);
        if dist < best.1 {
            best = (c, dist);
        }
    }
    best
}

/// Lloyd iterations from `k` distinct random points.
///
/// Assignment ties go to the lowest cluster id. A cluster left empty takes
/// the point farthest from its center among clusters of size at least two.
pub fn lloyd(points: &[Vec<f64>], k: usize, seed: u64, cfg: &LloydConfig) -> Result<ClusteringResult> {
    check_points(points)?;
    let n = points.len();
    if k == 0 || k > n {
        return Err(JlError::param(format!("need 1 <= k <= |X| = {n}, got k = {k}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut centers: Vec<Vec<f64>> = sample(&mut rng, n, k).into_iter().map(|i| points[i].clone()).collect();
    let mut history = Vec::new();
    let mut previous: Option<Vec<usize>> = None;
    let mut converged = false;
    let mut partition = Partition::new(vec![0; n], k)?;
    let mut cost = f64::INFINITY;
    let mut iterations = 0;

    while iterations < cfg.max_iter {
        iterations += 1;
        let mut assignment = Vec::with_capacity(n);
        let mut dists = Vec::with_capacity(n);
        for p in points {
            let (c, dist) = nearest(p, &centers);
            assignment.push(c);
            dists.push(dist);
        }
        let mut sizes = vec![0usize; k];
        assignment.iter().for_each(|&c| sizes[c] += 1);
        for empty in 0..k {
            if sizes[empty] > 0 {
                continue;
            }
            let mut far: Option<usize> = None;
            for i in 0..n {
                if sizes[assignment[i]] >= 2 && far.is_none_or(|f| dists[i] > dists[f]) {
                    far = Some(i);
                }
            }
            let i = far.expect("k <= n leaves a cluster with two or more points");
            sizes[assignment[i]] -= 1;
            sizes[empty] = 1;
            assignment[i] = empty;
            dists[i] = 0.0;
        }
        partition = Partition::new(assignment, k)?;
        centers = partition.centroids(points)?;
        let new_cost = cost_centroid(points, &partition)?;
        history.push(new_cost);
        let stalled = previous.as_deref() == Some(partition.assignment());
        let small_change = cost.is_finite() && (cost - new_cost).abs() <= cfg.rel_tol * cost.abs();
        cost = new_cost;
        if stalled || small_change || cost == 0.0 {
            converged = true;
            break;
        }
        previous = Some(partition.assignment().to_vec());
    }

    Ok(ClusteringResult { centers, partition, cost, iterations, converged, cost_history: history })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JlKmeansReport {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub k: usize,
    pub eps: f64,
    pub kind: String,
    /// Lloyd cost in the embedded space.
    pub kappa_m: f64,
    /// The embedded-space partition evaluated on the original points.
    pub kappa_d_lifted: f64,
    /// Lloyd run directly on the original points.
    pub kappa_d_direct: f64,
    /// `kappa_d_lifted / kappa_d_direct`, absent when the direct cost is 0.
    pub lifted_over_direct: Option<f64>,
    /// `(1 − ε)·kappa_d_lifted / kappa_m`, absent when `kappa_m` is 0.
    pub lifted_over_embedded: Option<f64>,
    pub distances_preserved: bool,
    pub worst_pair_distortion: f64,
    /// `|kappa_m − kappa_d_lifted| ≤ ε·kappa_d_lifted`.
    pub transfer_bound_holds: bool,
    pub seed: u64,
}

/// Embeds with one transform (seed `derive_seed(seed, 0)`) and runs Lloyd in
/// both spaces from the same init seed (`derive_seed(seed, 1)`).
///
/// `m` defaults to `target_dim_fm(eps, |X|)`; the identity kind always uses
/// `m = d`. The transform's δ is set to `1/|X|²`.
pub fn jl_kmeans(
    points: &[Vec<f64>],
    k: usize,
    eps: f64,
    kind: TransformKind,
    m: Option<usize>,
    seed: u64,
    cfg: &LloydConfig,
) -> Result<JlKmeansReport> {
    check_points(points)?;
    let n = points.len();
    if n < 2 {
        return Err(JlError::param("need at least two points"));
    }
    let d = points[0].len();
    let m = match (kind, m) {
        (TransformKind::Identity, _) => d,
        (_, Some(m)) => m,
        (_, None) => target_dim_fm(eps, n as f64)?,
    };
    let delta = 1.0 / (n * n) as f64;
    let params = JlParams::new(d, m, eps, delta, derive_seed(seed, 0))?;
    let f = kind.sample(&params)?;
    let embedded = points.iter().map(|p| f.apply(p)).collect::<Result<Vec<_>>>()?;
    let init = derive_seed(seed, 1);
    let low = lloyd(&embedded, k, init, cfg)?;
    let high = lloyd(points, k, init, cfg)?;
    let kappa_m = low.cost;
    let kappa_d_lifted = cost_centroid(points, &low.partition)?;
    let kappa_d_direct = high.cost;
    let worst = worst_pair_distortion(points, &embedded);
    Ok(JlKmeansReport {
        n,
        d,
        m: f.target_dim(),
        k,
        eps,
        kind: kind.name().to_string(),
        kappa_m,
        kappa_d_lifted,
        kappa_d_direct,
        lifted_over_direct: (kappa_d_direct > 0.0).then(|| kappa_d_lifted / kappa_d_direct),
        lifted_over_embedded: (kappa_m > 0.0).then(|| (1.0 - eps) * kappa_d_lifted / kappa_m),
        distances_preserved: worst <= eps,
        worst_pair_distortion: worst,
        transfer_bound_holds: (kappa_m - kappa_d_lifted).abs() <= eps * kappa_d_lifted * (1.0 + 1e-12),
        seed,
    })
}
