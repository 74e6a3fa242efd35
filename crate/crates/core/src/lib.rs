//! Positive solutions of the homogeneous Hammerstein equation
//! `∫₀¹ K(t,u) f(u)^θ du = f(t)` and of the normalized fixed-point problem
//! `R_α f = f`, kernels built to have a prescribed number of positive
//! solutions, and the translation-invariant Gibbs measures those solutions
//! describe on Cayley trees.
//!
//! Module map:
//!
//! - [`quadrature`]: rules on `[0,1]` and node-sampled [`GridFunction`]s
//! - [`cauchy`]: Cauchy-matrix closed forms and the odd-moment matrices
//! - [`kernel`]: the constructed kernels `K_(n,p)(t,u;k)` and their designed fixed points
//! - [`operators`]: `H_θ`, `R_α`, `W`, `ω`, fixed-point conversions, uniqueness test
//! - [`solver`]: damped Picard iteration, multi-start search, fixed-point counting
//! - [`gibbs`]: Cayley-tree models, boundary laws, finite-volume measures
//! - [`input`], [`report`], [`cli`]: file formats, run reports and the `hamlab` binary

pub mod cauchy;
pub mod cli;
pub mod error;
pub mod gibbs;
pub mod input;
pub mod kernel;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod solver;

pub use error::{Error, Result};
pub use quadrature::{GridFunction, QuadratureRule, Scheme};

/// Grid values at or below this count as zero for positivity checks.
pub const POSITIVITY_FLOOR: f64 = 1e-300;
