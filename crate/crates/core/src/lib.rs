//! Johnson–Lindenstrauss transforms and the machinery built around them.
//!
//! The crate is organised by construction family:
//!
//! * [`dense`]: Gaussian, Rademacher and Achlioptas matrices.
//! * [`sparse`]: Feature Hashing, block/graph sparse JL and the DKS
//!   duplicate-then-hash construction.
//! * [`structured`]: Walsh–Hadamard and FFT based transforms (FJLT, SRHT,
//!   Toeplitz, lean Walsh, Kac walks).
//! * [`streaming`]: AMS and Count Sketch in the turnstile model, plus a
//!   heavy-hitter heap.
//! * [`kmeans`]: Lloyd's algorithm and the JL-accelerated clustering pipeline.
//! * [`harness`]: Monte Carlo estimation of distortion and failure rates.
//!
//! Every random object is a pure function of a 64-bit seed, see [`seed`].

pub mod dense;
pub mod error;
pub mod harness;
pub mod hashing;
pub mod kmeans;
pub mod params;
pub mod seed;
pub mod sparse;
pub mod stats;
pub mod streaming;
pub mod structured;
pub mod transform;

pub use error::{JlError, Result};
pub use params::{sq_norm, sq_norm_ratio, target_dim_fm, target_dim_union, JlParams};
pub use seed::{derive_seed, SeedStream};
pub use stats::DistortionStats;
pub use transform::{LinearEmbedding, Transform, TransformKind};
