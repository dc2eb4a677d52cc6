//! Peaking of least squares learning curves in supervised and
//! semi-supervised settings.
//!
//! * [`numerics`]: pseudo-inverses, PCA, the normal CDF
//! * [`data`]: Gaussian problems, seeded sampling, CSV ingestion
//! * [`classifiers`]: Fisher and least squares fits, fixed-rank and infinite-unlabeled variants
//! * [`evaluation`]: analytic and empirical error
//! * [`approximation`]: closed-form learning-curve approximations
//! * [`experiments`]: the simulation and benchmark protocols
//! * [`cli`]: the `peaking` command line

pub mod approximation;
pub mod classifiers;
pub mod cli;
pub mod data;
pub mod error;
pub mod evaluation;
pub mod experiments;
pub mod numerics;
pub mod parallel;

pub use error::{Error, Result};
pub use parallel::Execution;
