//! Analysis of the degenerate Chenciner (generalized Neimark-Sacker)
//! bifurcation for planar maps in truncated polar normal form
//!
//! ```text
//! rho' = rho (1 + beta1(alpha) + beta2(alpha) rho^2 + L2(alpha) rho^4)
//! phi' = phi + theta0
//! ```
//!
//! When the classical parameter change `alpha -> (beta1, beta2)` is singular at
//! the origin, the discriminant-based change
//!
//! ```text
//! mu1 = beta2^2 - 4 beta1 L2,     mu2 = beta2 + L2 - L0
//! ```
//!
//! is used instead. The crate builds and inverts that change exactly over the
//! rationals ([`transform`]), sorts parameter points into the eight generic
//! phase-portrait regions ([`classify`]), enumerates invariant circles
//! ([`normal_form`]) and checks everything against direct iteration of the map
//! ([`simulate`]).
//!
//! Exact algebra is generic over the coefficient ring ([`Coefficient`]), and
//! numerics are generic over the float type ([`Scalar`]). The aliases below fix
//! the usual choices: arbitrary-precision rationals and `f64`.

pub mod classify;
pub mod error;
pub mod example;
pub mod normal_form;
pub mod scalar;
pub(crate) mod serde_display;
pub mod series;
pub mod sign;
pub mod simulate;
pub mod transform;

pub use error::{Condition, Error, Result};
pub use scalar::{Coefficient, Scalar};

use num_rational::BigRational;

/// Exact rational number used for every series coefficient by default.
pub type Rational = BigRational;

/// Truncated bivariate series with exact rational coefficients.
pub type Series = series::BivariateSeries<Rational>;

/// Normal-form system over exact rationals.
pub type System = normal_form::NormalFormSystem<Rational>;

/// Parameter transformation over exact rationals.
pub type Transform = transform::ParameterTransform<Rational>;

/// Invariant-circle census in double precision.
pub type Census = normal_form::CircleCensus<f64>;

/// Orbit record in double precision.
pub type Orbit = simulate::OrbitRecord<f64>;

/// Sign tolerances in double precision.
pub type Tol = sign::Tolerances<f64>;
