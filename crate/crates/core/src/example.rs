//! The reference degenerate system
//!
//! ```text
//! beta1 = a1 + a2 + 2 a1^2 + a2^2
//! beta2 = a1 + a2 + 2 a1 a2
//! L2    = 1 + a1 + 2 a2 + a1^2 + a2^3
//! ```
//!
//! with `L0 = 1`, `m2 = -5` and diagram D3, together with four parameter points
//! that land in regions 1, 2, 6 and 8.

use num_bigint::BigInt;

use crate::series::DEFAULT_ORDER;
use crate::{Rational, Series, System};

pub const BETA1: &str = "a1 + a2 + 2*a1^2 + a2^2";
pub const BETA2: &str = "a1 + a2 + 2*a1*a2";
pub const L2: &str = "1 + a1 + 2*a2 + a1^2 + a2^3";

/// Rotation angle used when none is given.
pub const THETA0: f64 = 0.05;

/// Shorthand for `n/d` as an exact rational.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn system() -> System {
    system_with_order(DEFAULT_ORDER)
}

pub fn system_with_order(order: u32) -> System {
    let p = |s: &str| Series::parse_with_order(s, order).expect("built-in series parses");
    System::new(p(BETA1), p(BETA2), p(L2), THETA0).expect("built-in system is valid")
}

/// A parameter point of the reference system with the values it should
/// reproduce.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoint {
    pub name: &'static str,
    pub alpha: (f64, f64),
    pub theta0: f64,
    /// Iteration count used for the orbits at this point.
    pub steps: usize,
    /// Reference `(mu1, mu2)` as quoted, to four significant digits.
    pub mu: (f64, f64),
    /// Absolute agreement required for each `mu` component.
    pub mu_tol: (f64, f64),
    pub region: u8,
    /// Circle radii, outermost first, with their stability.
    pub circles: &'static [(f64, &'static str)],
    /// Probe starts and the outcome each one should show.
    pub probes: &'static [(f64, &'static str)],
    /// Band for `Delta` and `mu1` that this point needs.
    pub delta_tol: f64,
}

impl ReferencePoint {
    /// Iteration count for a single probe of the given kind. The on-circle
    /// orbit at the region-1 point is followed for 400 steps only, since the
    /// circle there is unstable.
    pub fn probe_steps(&self, kind: &str) -> usize {
        if self.region == 1 && kind == "circle" {
            400
        } else {
            self.steps
        }
    }
}

pub fn reference_points() -> Vec<ReferencePoint> {
    vec![
        ReferencePoint {
            name: "R1",
            alpha: (-0.017, 0.015),
            theta0: 0.05,
            steps: 800,
            mu: (4.8579e-3, 1.0782e-2),
            mu_tol: (1e-7, 1e-6),
            region: 1,
            circles: &[(0.18876, "unstable")],
            probes: &[(0.17, "origin"), (0.18876, "circle"), (0.195, "escape")],
            delta_tol: 1e-9,
        },
        ReferencePoint {
            name: "R2",
            alpha: (-0.015, 0.015),
            theta0: 0.03,
            steps: 700,
            mu: (-2.7e-3, 1.4778e-2),
            mu_tol: (1e-4, 1e-6),
            region: 2,
            circles: &[],
            probes: &[(0.001, "escape")],
            delta_tol: 1e-9,
        },
        ReferencePoint {
            name: "R6",
            alpha: (-0.015719, 0.015),
            theta0: 0.02,
            steps: 1000,
            mu: (0.0, 1.3341e-2),
            mu_tol: (1e-5, 1e-6),
            region: 6,
            circles: &[(0.0242, "semi-stable")],
            probes: &[(0.024223, "circle"), (0.1, "escape")],
            delta_tol: 1e-5,
        },
        ReferencePoint {
            name: "R8",
            alpha: (-0.5, 0.05),
            theta0: 0.03,
            steps: 5000,
            mu: (0.0714, -0.6498),
            mu_tol: (1e-4, 1e-4),
            region: 8,
            circles: &[(0.6718, "unstable"), (0.3699, "stable")],
            probes: &[(0.2, "circle"), (0.5, "circle"), (0.7, "escape")],
            delta_tol: 1e-9,
        },
    ]
}
