//! Numerical laboratory for generalized multilinear Bohnenblust–Hille
//! inequalities.
//!
//! The crate is organized bottom-up:
//!
//! - [`exponents`]: arithmetic on summability exponents (conjugates, the
//!   feasibility budget, λ/ρ formulas, simplex-face decomposition,
//!   interpolation and constant bounds).
//! - [`tensor`]: dense coefficient tensors and nested mixed norms
//!   `ℓ_{q_1}(ℓ_{q_2}(…ℓ_{q_m}))`, plus the plain-text tensor format.
//! - [`opnorm`]: operator norms of multilinear forms over products of
//!   `ℓ_p` balls, by exact enumeration of extreme points or by
//!   alternating ascent.
//! - [`constructions`]: random sign forms with small norm, the 2×2 bilinear
//!   extremizer, the degenerate product form and the vector/scalar
//!   flattening.
//! - [`experiments`]: verification and sharpness experiments with growth
//!   fits and CSV/JSON output.

pub mod constructions;
pub mod error;
pub mod experiments;
pub mod exponents;
pub mod numfmt;
pub mod opnorm;
pub mod rng;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use exponents::{ExponentVector, Field, ProblemSpec};
pub use scalar::Scalar;
pub use tensor::{CoefficientTensor, MixedNormSpec};
