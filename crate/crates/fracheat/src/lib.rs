//! Numerical toolkit for the fully fractional heat operator
//! `(d/dt - Laplacian)^s` on `R^n x R`, `0 < s < 1`, `n <= 3`.
//!
//! The operator is the singular integral over all past times with a
//! Gaussian-in-space, power-law-in-time kernel; its right-sided mirror
//! integrates over future times. The crate provides:
//!
//! - [`quadrature`]: pointwise evaluation of both operators on closed-form
//!   fields, with analytic near-field correction and controlled far-field
//!   truncation;
//! - [`spectral`]: the same operators on periodic sampled fields through the
//!   Fourier multipliers `(i rho + |xi|^2)^s` / `(-i rho + |xi|^2)^s`;
//! - [`greens`]: the causal fundamental solution, forced-equation solver by
//!   convolution, and truncated-source decay profiles;
//! - [`verify`]: machine checks of the operator's decay envelope, its
//!   sharpness on the parabolic set `|x|^2 ~ |t|`, and the reduction
//!   identities (fractional laplacian, one-sided time derivative, local
//!   heat operator);
//! - [`equivalence`]: Picard solver for the forced integral equation and the
//!   residual check that its solutions satisfy the pseudo-differential
//!   equation.
//!
//! All numerics are generic over the scalar type via [`scalar::Real`]
//! (`f32` or `f64`); concrete `f64` aliases are exported at the crate root.

pub mod equivalence;
pub mod error;
pub mod field;
pub mod greens;
pub mod grid;
pub mod membership;
pub mod order;
pub mod quadrature;
pub mod report;
pub mod rules;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod symbol;
pub mod verify;

pub use error::{Error, Result};
pub use order::{frac, FracOrder};
pub use scalar::Real;
pub use symbol::Side;

/// Concrete `f64` aliases for the main types.
pub type AnalyticField64 = field::AnalyticField<f64>;
pub type OperatorParams64 = quadrature::OperatorParams<f64>;
pub type QuadResult64 = quadrature::QuadResult<f64>;
pub type SpaceTimeGrid64 = grid::SpaceTimeGrid<f64>;
pub type SampledField64 = grid::SampledField<f64>;
pub type GreensKernel64 = greens::GreensKernel<f64>;
pub type FracOrder64 = FracOrder<f64>;
