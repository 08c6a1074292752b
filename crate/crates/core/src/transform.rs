//! Uniform handle over every construction kind.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dense::{self, DenseTransform};
use crate::error::{check_dim, JlError, Result};
use crate::params::JlParams;
use crate::sparse::{self, default_sparsity, SparseTransform};
use crate::structured::{
    fjlt_new, kacjl_new, lwtjl_new, srht_new, toeplitz_new, KacJlConfig, LwtInner, SeedMatrix,
    StructuredTransform,
};

/// A linear map `R^d → R^m`.
pub trait LinearEmbedding {
    fn source_dim(&self) -> usize;
    fn target_dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>>;

    /// Column-major images of the standard basis: entry `(i, j)` sits at
    /// `j * target_dim + i`.
    fn materialize(&self) -> Result<Vec<f64>> {
        let d = self.source_dim();
        let mut out = Vec::with_capacity(d * self.target_dim());
        let mut e = vec![0.0; d];
        for j in 0..d {
            e[j] = 1.0;
            out.extend(self.apply(&e)?);
            e[j] = 0.0;
        }
        Ok(out)
    }
}

/// Construction kind plus its kind-specific knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TransformKind {
    Gaussian {
        orthonormal: bool,
    },
    Rademacher,
    Achlioptas {
        q: f64,
    },
    FeatureHashing,
    /// `None` selects `⌈ε⁻¹ ln(1/δ)⌉`.
    Block {
        s: Option<usize>,
    },
    Graph {
        s: Option<usize>,
    },
    Dks {
        s: Option<usize>,
    },
    Fjlt {
        c_q: f64,
    },
    Srht,
    Toeplitz,
    Lwtjl {
        inner: LwtInner,
    },
    KacJl(KacJlConfig),
    /// Requires `m = d`.
    Identity,
}

impl TransformKind {
    /// The eleven JL constructions with default knobs.
    pub fn catalog() -> [TransformKind; 11] {
        [
            Self::Gaussian { orthonormal: false },
            Self::Rademacher,
            Self::Achlioptas { q: 1.0 / 3.0 },
            Self::FeatureHashing,
            Self::Block { s: None },
            Self::Graph { s: None },
            Self::Dks { s: None },
            Self::Fjlt { c_q: 1.0 },
            Self::Srht,
            Self::Toeplitz,
            Self::KacJl(KacJlConfig::default()),
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Gaussian { orthonormal: false } => "gaussian",
            Self::Gaussian { orthonormal: true } => "gaussian-orthonormal",
            Self::Rademacher => "rademacher",
            Self::Achlioptas { .. } => "achlioptas",
            Self::FeatureHashing => "feature-hashing",
            Self::Block { .. } => "block",
            Self::Graph { .. } => "graph",
            Self::Dks { .. } => "dks",
            Self::Fjlt { .. } => "fjlt",
            Self::Srht => "srht",
            Self::Toeplitz => "toeplitz",
            Self::Lwtjl { .. } => "lwtjl",
            Self::KacJl(_) => "kacjl",
            Self::Identity => "identity",
        }
    }

    pub fn sample(&self, p: &JlParams) -> Result<Transform> {
        let sparsity = |s: Option<usize>| s.unwrap_or_else(|| default_sparsity(p.eps, p.delta, p.m));
        Ok(match *self {
            Self::Gaussian { orthonormal: false } => Transform::Dense(dense::gaussian_new(p)),
            Self::Gaussian { orthonormal: true } => Transform::Dense(dense::gaussian_orthonormal_new(p)?),
            Self::Rademacher => Transform::Dense(dense::rademacher_new(p)),
            Self::Achlioptas { q } => Transform::Dense(dense::achlioptas_new(p, q)?),
            Self::FeatureHashing => Transform::Sparse(sparse::feature_hashing_new(p)?),
            Self::Block { s } => Transform::Sparse(sparse::block_new(p, sparsity(s))?),
            Self::Graph { s } => Transform::Sparse(sparse::graph_new(p, sparsity(s))?),
            Self::Dks { s } => Transform::Sparse(sparse::dks_new(p, sparsity(s))?),
            Self::Fjlt { c_q } => Transform::Structured(StructuredTransform::Fjlt(fjlt_new(p, c_q)?)),
            Self::Srht => Transform::Structured(StructuredTransform::Srht(srht_new(p))),
            Self::Toeplitz => Transform::Structured(StructuredTransform::Toeplitz(toeplitz_new(p))),
            Self::Lwtjl { inner } => Transform::Structured(StructuredTransform::Lwtjl(lwtjl_new(
                p,
                SeedMatrix::partial_hadamard(2, 4)?,
                inner,
            )?)),
            Self::KacJl(cfg) => Transform::Structured(StructuredTransform::KacJl(kacjl_new(p, &cfg)?)),
            Self::Identity => {
                if p.m != p.d {
                    return Err(JlError::param("identity transform needs m = d"));
                }
                Transform::Identity(p.d)
            }
        })
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransformKind {
    type Err = JlError;

    /// Parses a kind name with default knobs.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "gaussian" => Self::Gaussian { orthonormal: false },
            "gaussian-orthonormal" | "orthonormal" => Self::Gaussian { orthonormal: true },
            "rademacher" => Self::Rademacher,
            "achlioptas" => Self::Achlioptas { q: 1.0 / 3.0 },
            "feature-hashing" | "fh" => Self::FeatureHashing,
            "block" => Self::Block { s: None },
            "graph" => Self::Graph { s: None },
            "dks" => Self::Dks { s: None },
            "fjlt" => Self::Fjlt { c_q: 1.0 },
            "srht" => Self::Srht,
            "toeplitz" => Self::Toeplitz,
            "lwtjl" => Self::Lwtjl { inner: LwtInner::Rademacher },
            "kacjl" | "kac" => Self::KacJl(KacJlConfig::default()),
            "identity" => Self::Identity,
            other => return Err(JlError::param(format!("unknown transform kind `{other}`"))),
        })
    }
}

/// A sampled transform. Immutable after sampling.
#[derive(Debug, Clone)]
pub enum Transform {
    Dense(DenseTransform),
    Sparse(SparseTransform),
    Structured(StructuredTransform),
    Identity(usize),
}

impl LinearEmbedding for Transform {
    fn source_dim(&self) -> usize {
        match self {
            Self::Dense(t) => t.source_dim(),
            Self::Sparse(t) => t.source_dim(),
            Self::Structured(t) => t.source_dim(),
            Self::Identity(d) => *d,
        }
    }

    fn target_dim(&self) -> usize {
        match self {
            Self::Dense(t) => t.target_dim(),
            Self::Sparse(t) => t.target_dim(),
            Self::Structured(t) => t.target_dim(),
            Self::Identity(d) => *d,
        }
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            Self::Dense(t) => t.apply(x),
            Self::Sparse(t) => t.apply(x),
            Self::Structured(t) => t.apply(x),
            Self::Identity(d) => {
                check_dim(*d, x.len())?;
                Ok(x.to_vec())
            }
        }
    }
}
