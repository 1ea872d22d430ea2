//! Sign tests with a zero band.

use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Positive,
}

impl Sign {
    /// Sign of `x`, with `|x| < tol` read as zero.
    pub fn of<F: Scalar>(x: F, tol: F) -> Sign {
        if x == F::zero() || x.abs() < tol {
            Sign::Zero
        } else if x > F::zero() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    /// Exact sign of a signed value.
    pub fn exact<T: Signed>(x: &T) -> Sign {
        if x.is_positive() {
            Sign::Positive
        } else if x.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        match self.as_i8() * rhs.as_i8() {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Zero,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "-",
            Sign::Zero => "0",
            Sign::Positive => "+",
        })
    }
}

/// Zero bands used when reading signs off evaluated quantities.
///
/// `delta` applies to the discriminant (and to `mu1`, which equals it), `beta`
/// to `beta1`, `beta2`, `L0` and circle multipliers. `root` is the smallest
/// `y = rho^2` accepted as an invariant circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances<F> {
    pub delta: F,
    pub beta: F,
    pub root: F,
}

impl<F: Scalar> Tolerances<F> {
    /// Same band for the discriminant and the betas.
    pub fn uniform(tol: F) -> Self {
        Self {
            delta: tol,
            beta: tol,
            root: F::lit(1e-12),
        }
    }

    pub fn with_delta(mut self, delta: F) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_beta(mut self, beta: F) -> Self {
        self.beta = beta;
        self
    }
}

impl<F: Scalar> Default for Tolerances<F> {
    fn default() -> Self {
        Self::uniform(F::lit(1e-9))
    }
}

impl<F: Scalar> From<F> for Tolerances<F> {
    fn from(tol: F) -> Self {
        Self::uniform(tol)
    }
}

/// Replaces values inside the zero band by an exact zero.
pub(crate) fn snap<F: Scalar>(x: F, tol: F) -> F {
    if x.abs() < tol {
        F::zero()
    } else {
        x
    }
}
