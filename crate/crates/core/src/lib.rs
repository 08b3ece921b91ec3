//! Operator calculus for `α∂^k∂̄^k + β∂̄^k + γ∂^k + c` on `L²(ℂ, e^{-|z|²})`.
//!
//! Polynomial arithmetic is generic over [`Scalar`]; identity checks run over
//! [`GaussianRational`] and the least-norm solver over `Complex<f64>`.

pub mod error;
pub mod fock;
pub mod identity_lab;
pub mod ladder;
pub mod operators;
pub mod sample;
pub mod scalar;
pub mod oracle;
pub mod solver;
pub mod transforms;
pub mod zpoly;

use num_complex::Complex64;

pub use error::{Error, Result};
pub use fock::{PiRational, PiValue};
pub use operators::{OperatorParams, PureCase};
pub use scalar::{GaussianRational, Scalar};
pub use zpoly::{Mono, ZPoly};

/// Polynomial with exact Gaussian-rational coefficients.
pub type ExactPoly = ZPoly<GaussianRational>;
/// Polynomial with double-precision complex coefficients.
pub type FloatPoly = ZPoly<Complex64>;
