//! Fairness-aware embedding projection toolkit.
//!
//! The library fits group-constrained linear projections over labeled
//! embedding datasets and applies them to pooled and token-level vectors.
//! A projection can be fit with a soft fairness penalty or a hard
//! null-space constraint that removes linear group-mean separability,
//! optionally followed by empirical noise injection along estimated
//! per-group bias directions. Evaluation is file-based: linear-probe
//! separability, a normalized-deviation fairness score over predicted
//! group counts, and reconstruction/explained-variance fidelity numbers.
//!
//! Modules:
//! - [`data`]: labeled embedding records, group schemas, indicator
//!   matrices, CSV and binary dataset formats.
//! - [`linalg`]: deterministic dense kernels (covariance, Jacobi
//!   eigendecomposition, null-space bases, projection).
//! - [`fairpca`]: projection fitting (penalized and null-space modes),
//!   model persistence, transform application.
//! - [`noise`]: bias-direction estimation and the noise injection
//!   variants.
//! - [`multi`]: cross / stack / sequential strategies for debiasing
//!   several attributes at once.
//! - [`metrics`]: fairness score, linear probe, fidelity numbers, and
//!   evaluation reports.
//! - [`synth`]: deterministic synthetic dataset generator used for
//!   benchmarks and tests.
//! - [`rng`]: the reproducible random number generator all stochastic
//!   paths share.

pub mod data;
pub mod error;
pub mod fairpca;
pub mod linalg;
pub mod metrics;
pub mod multi;
pub mod noise;
pub mod rng;
pub mod synth;

pub use error::{Error, Result};
