//! The truncated normal form, its genericity conditions and its invariant
//! circles.
//!
//! Invariant circles `rho = sqrt(y)` are the positive roots of
//! `L2 y^2 + beta2 y + beta1 = 0`. The radial map is `rho -> rho h(rho^2)` with
//! `h(y) = 1 + beta1 + beta2 y + L2 y^2`, so at a root its derivative is
//! `1 + 2 beta2 y + 4 L2 y^2` once `beta1` is eliminated. That multiplier
//! decides stability.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Condition, Error, Result};
use crate::scalar::{Coefficient, Scalar};
use crate::series::BivariateSeries;
use crate::sign::{snap, Sign, Tolerances};

/// `(beta1, beta2, L2)` as series in `alpha`, plus the rotation angle.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormSystem<C: Coefficient> {
    beta1: BivariateSeries<C>,
    beta2: BivariateSeries<C>,
    l2: BivariateSeries<C>,
    theta0: f64,
}

/// Linear and quadratic coefficients read off the three series.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Coefficients<C: std::fmt::Display> {
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub l0: C,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub c1: C,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub c2: C,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub d1: C,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub d2: C,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub l1: C,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub l2: C,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub c20: C,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub c11: C,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub c02: C,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub d20: C,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub d11: C,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub d02: C,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ValidationReport<C: std::fmt::Display> {
    /// beta1(0) = beta2(0) = 0 and L0 != 0.
    pub chenciner_ok: bool,
    pub beta1_vanishes: bool,
    pub beta2_vanishes: bool,
    pub l0_nonzero: bool,
    /// c1 d2 - c2 d1 = 0.
    pub degenerate: bool,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub degeneracy_det: C,
    /// c1 l2 - c2 l1 != 0.
    pub new_regular: bool,
    #[serde(serialize_with = "crate::serde_display::serialize")]
    pub regularity_det: C,
    /// c1 != 0 and c2 != 0.
    pub c_nonzero: bool,
    /// d1 != 0 and d2 != 0.
    pub d_nonzero: bool,
    pub constants: Coefficients<C>,
}

impl<C: Coefficient> ValidationReport<C> {
    /// First violated condition, checked in the order a degenerate analysis
    /// needs them.
    pub fn first_failure(&self) -> Option<Condition> {
        if !(self.beta1_vanishes && self.beta2_vanishes) {
            Some(Condition::Chenciner)
        } else if !self.l0_nonzero {
            Some(Condition::L0Nonzero)
        } else if !self.degenerate {
            Some(Condition::Degeneracy)
        } else if !self.new_regular {
            Some(Condition::Regularity)
        } else {
            None
        }
    }
}

impl<C: Coefficient> NormalFormSystem<C> {
    /// Builds a system satisfying the Chenciner conditions:
    /// `beta1(0) = beta2(0) = 0`, `L0 != 0` and `0 < theta0 < pi`.
    pub fn new(
        beta1: BivariateSeries<C>,
        beta2: BivariateSeries<C>,
        l2: BivariateSeries<C>,
        theta0: f64,
    ) -> Result<Self> {
        let sys = Self::new_unchecked(beta1, beta2, l2, theta0)?;
        let report = sys.validate();
        if !(report.beta1_vanishes && report.beta2_vanishes) {
            return Err(Error::Genericity(Condition::Chenciner));
        }
        if !report.l0_nonzero {
            return Err(Error::ZeroL0);
        }
        Ok(sys)
    }

    /// Builds a system checking only the angle, so that [`Self::validate`]
    /// can report on arbitrary input.
    pub fn new_unchecked(
        beta1: BivariateSeries<C>,
        beta2: BivariateSeries<C>,
        l2: BivariateSeries<C>,
        theta0: f64,
    ) -> Result<Self> {
        if !(theta0 > 0.0 && theta0 < std::f64::consts::PI) {
            return Err(Error::InvalidAngle(theta0));
        }
        Ok(Self {
            beta1,
            beta2,
            l2,
            theta0,
        })
    }

    pub fn beta1(&self) -> &BivariateSeries<C> {
        &self.beta1
    }

    pub fn beta2(&self) -> &BivariateSeries<C> {
        &self.beta2
    }

    pub fn l2(&self) -> &BivariateSeries<C> {
        &self.l2
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn with_theta0(&self, theta0: f64) -> Result<Self> {
        Self::new_unchecked(
            self.beta1.clone(),
            self.beta2.clone(),
            self.l2.clone(),
            theta0,
        )
    }

    /// Working order: the smallest order among the three series.
    pub fn order(&self) -> u32 {
        self.beta1
            .order()
            .min(self.beta2.order())
            .min(self.l2.order())
    }

    pub fn l0(&self) -> C {
        self.l2.constant_term()
    }

    pub fn coefficients(&self) -> Coefficients<C> {
        let (c1, c2) = self.beta1.linear_part();
        let (d1, d2) = self.beta2.linear_part();
        let (l1, l2) = self.l2.linear_part();
        Coefficients {
            l0: self.l0(),
            c1,
            c2,
            d1,
            d2,
            l1,
            l2,
            c20: self.beta1.coeff(2, 0),
            c11: self.beta1.coeff(1, 1),
            c02: self.beta1.coeff(0, 2),
            d20: self.beta2.coeff(2, 0),
            d11: self.beta2.coeff(1, 1),
            d02: self.beta2.coeff(0, 2),
        }
    }

    /// Exact checks of the standing assumptions.
    pub fn validate(&self) -> ValidationReport<C> {
        let k = self.coefficients();
        let beta1_vanishes = self.beta1.constant_term().is_zero();
        let beta2_vanishes = self.beta2.constant_term().is_zero();
        let l0_nonzero = !k.l0.is_zero();
        let degeneracy_det = k.c1.clone() * k.d2.clone() - k.c2.clone() * k.d1.clone();
        let regularity_det = k.c1.clone() * k.l2.clone() - k.c2.clone() * k.l1.clone();
        ValidationReport {
            chenciner_ok: beta1_vanishes && beta2_vanishes && l0_nonzero,
            beta1_vanishes,
            beta2_vanishes,
            l0_nonzero,
            degenerate: degeneracy_det.is_zero(),
            new_regular: !regularity_det.is_zero(),
            degeneracy_det,
            regularity_det,
            c_nonzero: !k.c1.is_zero() && !k.c2.is_zero(),
            d_nonzero: !k.d1.is_zero() && !k.d2.is_zero(),
            constants: k,
        }
    }

    /// `beta1`, `beta2` and `L2` evaluated at `alpha`.
    pub fn at<F: Scalar>(&self, alpha: (F, F)) -> MapCoefficients<F> {
        MapCoefficients {
            beta1: self.beta1.eval(alpha.0, alpha.1),
            beta2: self.beta2.eval(alpha.0, alpha.1),
            l2: self.l2.eval(alpha.0, alpha.1),
        }
    }

    /// One step of the truncated map at fixed `alpha`.
    pub fn map_step<F: Scalar>(&self, alpha: (F, F), rho: F, phi: F) -> Step<F> {
        self.at(alpha).step(rho, phi, F::lit(self.theta0))
    }

    pub fn invariant_circles<F: Scalar>(
        &self,
        alpha: (F, F),
        tol: &Tolerances<F>,
    ) -> Result<CircleCensus<F>> {
        self.at(alpha).census(tol)
    }

    pub fn origin_stability<F: Scalar>(
        &self,
        alpha: (F, F),
        tol: &Tolerances<F>,
    ) -> OriginStability {
        let l0 = F::from_coefficient(&self.l0());
        self.at(alpha).origin_stability(l0, tol)
    }
}

/// `beta1 = r - 1`, `beta2 = Re b1` and
/// `L2 = (Im^2 b1 + 2 (1 + beta1) Re b2) / (2 (1 + beta1))` from the complex
/// normal-form data `(r, b1, b2)`.
pub fn from_complex_data<F: Scalar>(r: F, b1: Complex<F>, b2: Complex<F>) -> Result<(F, F, F)> {
    if !(r > F::zero()) {
        return Err(Error::InvalidModulus(r.to_f64().unwrap_or(f64::NAN)));
    }
    let two = F::lit(2.0);
    let beta1 = r - F::one();
    let beta2 = b1.re;
    let l2 = (b1.im * b1.im + two * r * b2.re) / (two * r);
    Ok((beta1, beta2, l2))
}

/// Result of [`NormalFormSystem::map_step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step<F> {
    pub rho: F,
    /// Angle reduced to `[0, 2 pi)`.
    pub phi: F,
    /// `rho` came out negative: the orbit left the region where the
    /// truncated map means anything.
    pub left_domain: bool,
}

/// Numeric values of the normal-form coefficients at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapCoefficients<F> {
    pub beta1: F,
    pub beta2: F,
    pub l2: F,
}

impl<F: Scalar> MapCoefficients<F> {
    pub fn new(beta1: F, beta2: F, l2: F) -> Self {
        Self { beta1, beta2, l2 }
    }

    /// `Delta = beta2^2 - 4 beta1 L2`.
    pub fn delta(&self) -> F {
        self.beta2 * self.beta2 - F::lit(4.0) * self.beta1 * self.l2
    }

    /// `h(y) - 1 = beta1 + beta2 y + L2 y^2`.
    pub fn growth(&self, y: F) -> F {
        self.beta1 + y * (self.beta2 + y * self.l2)
    }

    pub fn radial(&self, rho: F) -> F {
        rho * (F::one() + self.growth(rho * rho))
    }

    pub fn step(&self, rho: F, phi: F, theta0: F) -> Step<F> {
        let rho_next = self.radial(rho);
        let two_pi = F::lit(std::f64::consts::TAU);
        let t = phi + theta0;
        let phi_next = t - two_pi * (t / two_pi).floor();
        Step {
            rho: rho_next,
            phi: phi_next,
            left_domain: rho_next < F::zero(),
        }
    }

    /// Derivative of the radial map at a circle `rho = sqrt(y)`.
    pub fn multiplier(&self, y: F) -> F {
        F::one() + F::lit(2.0) * self.beta2 * y + F::lit(4.0) * self.l2 * y * y
    }

    pub fn census(&self, tol: &Tolerances<F>) -> Result<CircleCensus<F>> {
        if self.l2.abs() < tol.beta {
            return Err(Error::DegenerateQuadratic(
                self.l2.to_f64().unwrap_or(f64::NAN),
            ));
        }
        let delta = self.delta();
        let delta_sign = Sign::of(delta, tol.delta);
        let snapped = MapCoefficients {
            beta1: snap(self.beta1, tol.beta),
            beta2: snap(self.beta2, tol.beta),
            l2: self.l2,
        };
        let l = snapped.l2;
        let two = F::lit(2.0);
        let mut circles = Vec::new();
        match delta_sign {
            Sign::Negative => {}
            Sign::Zero => {
                let y = -snapped.beta2 / (two * l);
                if y > tol.root {
                    let side = if l > F::zero() {
                        SemiStableSide::InnerStable
                    } else {
                        SemiStableSide::InnerUnstable
                    };
                    circles.push(InvariantCircle {
                        root: RootLabel::Double,
                        y,
                        radius: y.sqrt(),
                        multiplier: snapped.multiplier(y),
                        stability: Stability::SemiStable(side),
                        coarse: Stability::Unstable,
                    });
                }
            }
            Sign::Positive => {
                let (lo, hi) = snapped.roots();
                // y1 - y2 = sqrt(Delta) / L2
                let (y1, y2) = if l > F::zero() { (hi, lo) } else { (lo, hi) };
                for (root, y) in [(RootLabel::First, y1), (RootLabel::Second, y2)] {
                    if y > tol.root {
                        let m = snapped.multiplier(y);
                        let stability = if m.abs() < F::one() - tol.beta {
                            Stability::Stable
                        } else if m.abs() > F::one() + tol.beta {
                            Stability::Unstable
                        } else if l > F::zero() {
                            Stability::SemiStable(SemiStableSide::InnerStable)
                        } else {
                            Stability::SemiStable(SemiStableSide::InnerUnstable)
                        };
                        circles.push(InvariantCircle {
                            root,
                            y,
                            radius: y.sqrt(),
                            multiplier: m,
                            stability,
                            coarse: stability,
                        });
                    }
                }
            }
        }
        Ok(CircleCensus {
            delta,
            delta_sign,
            circles,
        })
    }

    /// Both real roots of the quadratic in increasing order, computed without
    /// cancellation. Assumes a nonnegative discriminant.
    fn roots(&self) -> (F, F) {
        let (a, b, c) = (self.l2, self.beta2, self.beta1);
        let d = (b * b - F::lit(4.0) * a * c).max(F::zero()).sqrt();
        let q = if b >= F::zero() {
            -(b + d) / F::lit(2.0)
        } else {
            (d - b) / F::lit(2.0)
        };
        let (r1, r2) = if q == F::zero() {
            (F::zero(), F::zero())
        } else {
            (q / a, c / q)
        };
        if r1 <= r2 {
            (r1, r2)
        } else {
            (r2, r1)
        }
    }

    pub fn origin_stability(&self, l0: F, tol: &Tolerances<F>) -> OriginStability {
        let pick = |s: Sign| {
            if s == Sign::Negative {
                Stability::Stable
            } else {
                Stability::Unstable
            }
        };
        let b1 = Sign::of(self.beta1, tol.beta);
        if !b1.is_zero() {
            return OriginStability {
                stability: pick(b1),
                tier: StabilityTier::Linear,
            };
        }
        let b2 = Sign::of(self.beta2, tol.beta);
        if !b2.is_zero() {
            return OriginStability {
                stability: pick(b2),
                tier: StabilityTier::NonlinearBeta2,
            };
        }
        OriginStability {
            stability: pick(Sign::of(l0, F::zero())),
            tier: StabilityTier::NonlinearL0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SemiStableSide {
    /// Attracts from inside, repels outside.
    InnerStable,
    /// Repels inside, attracts from outside.
    InnerUnstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Stable,
    Unstable,
    SemiStable(SemiStableSide),
}

impl Stability {
    /// Whether orbits just outside move back toward the circle.
    pub fn attracts_from_outside(self) -> bool {
        matches!(
            self,
            Stability::Stable | Stability::SemiStable(SemiStableSide::InnerUnstable)
        )
    }

    /// Whether orbits just inside move back toward the circle.
    pub fn attracts_from_inside(self) -> bool {
        matches!(
            self,
            Stability::Stable | Stability::SemiStable(SemiStableSide::InnerStable)
        )
    }
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::SemiStable(SemiStableSide::InnerStable) => {
                "semi-stable (inner-stable/outer-unstable)"
            }
            Stability::SemiStable(SemiStableSide::InnerUnstable) => {
                "semi-stable (inner-unstable/outer-stable)"
            }
        })
    }
}

/// Which root formula produced a circle: `y1 = (sqrt(Delta) - beta2) / (2 L2)`,
/// `y2 = -(sqrt(Delta) + beta2) / (2 L2)`, or the double root at `Delta = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootLabel {
    First,
    Second,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantCircle<F> {
    pub root: RootLabel,
    pub y: F,
    pub radius: F,
    /// Derivative of the radial map at the circle.
    pub multiplier: F,
    pub stability: Stability,
    /// One-sided label: equal to `stability` except at a double root, where
    /// the classical case table only says "unstable".
    pub coarse: Stability,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleCensus<F> {
    pub delta: F,
    pub delta_sign: Sign,
    /// Circles in root-label order (`y1` before `y2`).
    pub circles: Vec<InvariantCircle<F>>,
}

impl<F: Scalar> CircleCensus<F> {
    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    /// Circles from the innermost outwards.
    pub fn by_radius(&self) -> Vec<InvariantCircle<F>> {
        let mut v = self.circles.clone();
        v.sort_by(|a, b| a.radius.partial_cmp(&b.radius).expect("finite radii"));
        v
    }

    pub fn radii(&self) -> Vec<F> {
        self.by_radius().iter().map(|c| c.radius).collect()
    }

    /// Circle whose radius is closest to `r`, with its relative distance.
    pub fn nearest(&self, r: F) -> Option<(InvariantCircle<F>, F)> {
        self.circles
            .iter()
            .map(|c| (*c, ((r - c.radius) / c.radius).abs()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite radii"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilityTier {
    /// Decided by the sign of `beta1`.
    Linear,
    /// `beta1 = 0`; decided by the sign of `beta2`.
    NonlinearBeta2,
    /// `beta1 = beta2 = 0`; decided by the sign of `L0`.
    NonlinearL0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OriginStability {
    pub stability: Stability,
    pub tier: StabilityTier,
}
