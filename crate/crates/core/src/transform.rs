//! The parameter change
//!
//! ```text
//! mu1 = beta2^2 - 4 beta1 L2,     mu2 = beta2 + L2 - L0
//! ```
//!
//! its series inverse, and the coefficient functions pulled back to `mu`.
//!
//! The inverse is found degree by degree. With `F` the forward pair and `A0`
//! its linear part, if `G` inverts `F` through degree `d - 1` then the degree
//! `d` part of `F(G) - id` is `A0 G_d + R_d` where `R_d` only involves lower
//! degrees of `G`, so `G_d = -A0^{-1} R_d`.

use serde::Serialize;

use crate::error::{Condition, Error, Result};
use crate::normal_form::{MapCoefficients, NormalFormSystem};
use crate::scalar::{Coefficient, Scalar};
use crate::series::BivariateSeries;

type Pair<C> = (BivariateSeries<C>, BivariateSeries<C>);

/// Default inversion order.
pub const DEFAULT_INVERSION_ORDER: u32 = 2;

/// `(mu1(alpha), mu2(alpha))` at the system's working order.
pub fn build_forward<C: Coefficient>(sys: &NormalFormSystem<C>) -> Pair<C> {
    let order = sys.order();
    let (b1, b2, l2) = (
        sys.beta1().truncate(order),
        sys.beta2().truncate(order),
        sys.l2().truncate(order),
    );
    let four = C::one() + C::one() + C::one() + C::one();
    let mu1 = &(&b2 * &b2) - &(&b1 * &l2).scale(&four);
    let l0 = BivariateSeries::constant(sys.l0(), order);
    let mu2 = &(&b2 + &l2) - &l0;
    (mu1, mu2)
}

/// Linear part of a series pair as a 2x2 matrix, rows per component.
pub fn linear_matrix<C: Coefficient>(pair: &Pair<C>) -> [[C; 2]; 2] {
    let (a, b) = pair.0.linear_part();
    let (c, d) = pair.1.linear_part();
    [[a, b], [c, d]]
}

fn det2<C: Coefficient>(m: &[[C; 2]; 2]) -> C {
    m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()
}

/// Inverts `forward` through degree `k`.
///
/// Fails with the regularity condition when the linear part is singular.
pub fn invert_series<C: Coefficient>(forward: &Pair<C>, k: u32) -> Result<Pair<C>> {
    let order = forward.0.order().min(forward.1.order());
    if k == 0 || k > order {
        return Err(Error::InversionOrder { k, order });
    }
    if !forward.0.constant_term().is_zero() || !forward.1.constant_term().is_zero() {
        return Err(Error::ShiftedComposition);
    }
    let a = linear_matrix(forward);
    let det = det2(&a);
    if det.is_zero() {
        return Err(Error::Genericity(Condition::Regularity));
    }
    let inv = [
        [
            a[1][1].clone() / det.clone(),
            -a[0][1].clone() / det.clone(),
        ],
        [
            -a[1][0].clone() / det.clone(),
            a[0][0].clone() / det.clone(),
        ],
    ];
    let lin = |row: &[C; 2]| {
        BivariateSeries::from_terms(k, [((1, 0), row[0].clone()), ((0, 1), row[1].clone())])
    };
    let mut g = (lin(&inv[0]), lin(&inv[1]));
    for d in 2..=k {
        let f1 = forward.0.truncate(d);
        let f2 = forward.1.truncate(d);
        let g1 = g.0.truncate(d);
        let g2 = g.1.truncate(d);
        let r1 = f1.compose(&g1, &g2)?.homogeneous(d);
        let r2 = f2.compose(&g1, &g2)?.homogeneous(d);
        // the identity has no degree-d part, so R_d is the whole residual
        let step = |row: &[C; 2]| -&(&r1.scale(&row[0]) + &r2.scale(&row[1]));
        g.0 = &g.0 + &step(&inv[0]).with_order(k);
        g.1 = &g.1 + &step(&inv[1]).with_order(k);
    }
    Ok(g)
}

/// `forward(inverse) - id`, truncated to the inverse's order.
pub fn round_trip_residual<C: Coefficient>(
    forward: &Pair<C>,
    inverse: &Pair<C>,
) -> Result<Pair<C>> {
    let k = inverse.0.order().min(inverse.1.order());
    let f1 = forward.0.truncate(k);
    let f2 = forward.1.truncate(k);
    let id1 = BivariateSeries::var(0, k);
    let id2 = BivariateSeries::var(1, k);
    Ok((
        &f1.compose(&inverse.0, &inverse.1)? - &id1,
        &f2.compose(&inverse.0, &inverse.1)? - &id2,
    ))
}

/// `beta1`, `beta2` and `L2` as functions of `mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct HatFunctions<C: Coefficient> {
    pub beta1: BivariateSeries<C>,
    pub beta2: BivariateSeries<C>,
    pub l2: BivariateSeries<C>,
}

impl<C: Coefficient> HatFunctions<C> {
    /// `beta2^2 - 4 beta1 L2 - mu1`; zero through the working order.
    pub fn discriminant_residual(&self) -> BivariateSeries<C> {
        let order = self.l2.order();
        let four = C::one() + C::one() + C::one() + C::one();
        let delta = &(&self.beta2 * &self.beta2) - &(&self.beta1 * &self.l2).scale(&four);
        &delta - &BivariateSeries::var(0, order)
    }

    pub fn eval<F: Scalar>(&self, mu: (F, F)) -> MapCoefficients<F> {
        MapCoefficients::new(
            self.beta1.eval(mu.0, mu.1),
            self.beta2.eval(mu.0, mu.1),
            self.l2.eval(mu.0, mu.1),
        )
    }
}

/// Hat functions at the system's working order.
///
/// `L2` is composed with the inverse, which is read as an exact polynomial when
/// it has lower order. `beta2` then follows exactly from the definition of
/// `mu2`, and `beta1` from the quadratic identity `mu1 = beta2^2 - 4 beta1 L2`.
pub fn hat_functions<C: Coefficient>(
    sys: &NormalFormSystem<C>,
    inverse: &Pair<C>,
) -> Result<HatFunctions<C>> {
    let order = sys.order();
    let (s1, s2) = (inverse.0.with_order(order), inverse.1.with_order(order));
    let l2 = sys.l2().truncate(order).compose(&s1, &s2)?;
    let l0 = BivariateSeries::constant(sys.l0(), order);
    let mu1 = BivariateSeries::var(0, order);
    let mu2 = BivariateSeries::var(1, order);
    let beta2 = &(&mu2 - &l2) + &l0;
    let four = C::one() + C::one() + C::one() + C::one();
    let beta1 = (&(&beta2 * &beta2) - &mu1).try_div(&l2.scale(&four))?;
    Ok(HatFunctions { beta1, beta2, l2 })
}

/// Lowest-terms view of a series in `mu`: the constant, the `mu1` term and
/// the pure `mu2` powers through `mu2_degree`. Every other term carries a
/// factor `mu1` together with something of positive degree, and is absorbed
/// into `mu1 (1 + O(|mu|))`.
pub fn lowest_terms<C: Coefficient>(s: &BivariateSeries<C>, mu2_degree: u32) -> BivariateSeries<C> {
    let keep = s
        .terms()
        .filter(|&((i, j), _)| (i == 0 && j <= mu2_degree) || (i == 1 && j == 0))
        .map(|(e, c)| (e, c.clone()));
    BivariateSeries::from_terms(s.order(), keep)
}

/// `m2` from the quadratic coefficients of `beta1`, `beta2` and the linear
/// part of `L2`.
pub fn m2_closed_form<C: Coefficient>(sys: &NormalFormSystem<C>) -> Result<C> {
    let k = sys.coefficients();
    if k.c1.is_zero() {
        return Err(Error::Genericity(Condition::C1Nonzero));
    }
    let den_root = k.d1.clone() * k.l2.clone() - k.d2.clone() * k.l1.clone();
    if den_root.is_zero() {
        return Err(Error::Genericity(Condition::M2Denominator));
    }
    let (d1, d2, c1) = (k.d1.clone(), k.d2.clone(), k.c1.clone());
    let d1sq = d1.clone() * d1.clone();
    let d2sq = d2.clone() * d2.clone();
    let num = k.c02 * d1sq.clone() * d1.clone()
        - k.c11 * d1sq.clone() * d2.clone()
        - c1.clone() * k.d02 * d1sq
        + k.c20 * d1.clone() * d2sq.clone()
        + c1.clone() * k.d11 * d1 * d2
        - c1.clone() * k.d20 * d2sq;
    Ok(-(num / (c1 * den_root.clone() * den_root)))
}

/// Constants carried by a transform.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct TransformConstants<C: std::fmt::Display> {
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
    /// Minus the `mu2^2` coefficient of the pulled-back `L2`. Needs working
    /// order at least 2.
    #[serde(serialize_with = "crate::serde_display::option::serialize")]
    pub m2: Option<C>,
    /// `4 L0 (c1 / d1) m2`; needs `d1 != 0`.
    #[serde(serialize_with = "crate::serde_display::option::serialize")]
    pub k1: Option<C>,
}

/// The forward change, its inverse to order `k`, and everything derived
/// from them.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterTransform<C: Coefficient> {
    pub forward: Pair<C>,
    pub inverse: Pair<C>,
    pub k: u32,
    pub order: u32,
    /// `det A0 = -4 L0 (c1 l2 - c2 l1)`.
    pub jacobian_det0: C,
    pub constants: TransformConstants<C>,
    /// Hat functions at the working order, built from an inverse of order at
    /// least 2 so that `m2` is available even when `k = 1`.
    pub hat: HatFunctions<C>,
    /// Whether `c1 d2 - c2 d1 = 0`. When false the change is still built but
    /// the degenerate analysis does not apply.
    pub degenerate: bool,
}

impl<C: Coefficient> ParameterTransform<C> {
    pub fn new(sys: &NormalFormSystem<C>, k: u32) -> Result<Self> {
        let order = sys.order();
        if k == 0 || k > order {
            return Err(Error::InversionOrder { k, order });
        }
        if sys.l0().is_zero() {
            return Err(Error::ZeroL0);
        }
        let report = sys.validate();
        let forward = build_forward(sys);
        let inverse = invert_series(&forward, k)?;
        let hat_k = k.max(2).min(order);
        let hat_inverse = if hat_k == k {
            inverse.clone()
        } else {
            invert_series(&forward, hat_k)?
        };
        let hat = hat_functions(sys, &hat_inverse)?;
        let c = report.constants;
        let m2 = (order >= 2).then(|| -hat.l2.coeff(0, 2));
        let four = C::one() + C::one() + C::one() + C::one();
        let k1 = match &m2 {
            Some(m2) if !c.d1.is_zero() => {
                Some(four * c.l0.clone() * c.c1.clone() / c.d1.clone() * m2.clone())
            }
            _ => None,
        };
        Ok(Self {
            jacobian_det0: det2(&linear_matrix(&forward)),
            forward,
            inverse,
            k,
            order,
            constants: TransformConstants {
                l0: c.l0,
                c1: c.c1,
                c2: c.c2,
                d1: c.d1,
                d2: c.d2,
                l1: c.l1,
                l2: c.l2,
                m2,
                k1,
            },
            hat,
            degenerate: report.degenerate,
        })
    }

    pub fn round_trip_residual(&self) -> Result<Pair<C>> {
        round_trip_residual(&self.forward, &self.inverse)
    }

    /// Whether `forward(inverse) - id` vanishes exactly through degree `k`.
    pub fn round_trip_exact(&self) -> bool {
        self.round_trip_residual()
            .map(|(a, b)| a.is_zero() && b.is_zero())
            .unwrap_or(false)
    }

    /// `alpha(mu)` from the inverse series.
    pub fn inverse_at<F: Scalar>(&self, mu: (F, F)) -> (F, F) {
        (
            self.inverse.0.eval(mu.0, mu.1),
            self.inverse.1.eval(mu.0, mu.1),
        )
    }

    /// `mu(alpha)` from the truncated forward series.
    pub fn forward_at<F: Scalar>(&self, alpha: (F, F)) -> (F, F) {
        (
            self.forward.0.eval(alpha.0, alpha.1),
            self.forward.1.eval(alpha.0, alpha.1),
        )
    }

    pub fn m2(&self) -> Result<&C> {
        match &self.constants.m2 {
            Some(m) if !m.is_zero() => Ok(m),
            _ => Err(Error::Genericity(Condition::M2Nonzero)),
        }
    }

    /// Leading-order boundary curves over `mu2_range`.
    pub fn boundary_curves(&self, mu2_range: (f64, f64), samples: usize) -> Result<BoundaryCurves> {
        let m2 = f64::from_coefficient(self.m2()?);
        let k1 = match &self.constants.k1 {
            Some(k1) => f64::from_coefficient(k1),
            None => return Err(Error::Genericity(Condition::D1Nonzero)),
        };
        Ok(BoundaryCurves::new(m2, k1, mu2_range, samples))
    }
}

/// Map `mu(alpha)` computed from the evaluated coefficients rather than from
/// the truncated forward series, so no high-degree product terms are lost.
pub fn mu_at<C: Coefficient, F: Scalar>(sys: &NormalFormSystem<C>, alpha: (F, F)) -> (F, F) {
    let m = sys.at(alpha);
    let l0 = F::from_coefficient(&sys.l0());
    (m.delta(), m.beta2 + m.l2 - l0)
}

/// Sampled `B1: mu1 = m2^2 mu2^4` and `B2: mu1 = k1 mu2^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCurves {
    pub m2: f64,
    pub k1: f64,
    /// `(mu2, mu1)` samples.
    pub b1: Vec<(f64, f64)>,
    pub b2: Vec<(f64, f64)>,
    /// `B1` lies in `mu1 > 0` away from the origin.
    pub b1_positive: bool,
    /// Half-plane holding `B2`: the sign of `k1`.
    pub b2_side: crate::sign::Sign,
    /// Near the origin `mu1` on `B2` exceeds `mu1` on `B1 > 0`, which puts
    /// `B2` inside `B1`.
    pub b2_inside_b1: bool,
}

impl BoundaryCurves {
    pub fn new(m2: f64, k1: f64, mu2_range: (f64, f64), samples: usize) -> Self {
        let (lo, hi) = mu2_range;
        let ts: Vec<f64> = match samples {
            0 => Vec::new(),
            1 => vec![(lo + hi) / 2.0],
            n => (0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect(),
        };
        let b1 = ts.iter().map(|&t| (t, m2 * m2 * t.powi(4))).collect();
        let b2 = ts.iter().map(|&t| (t, k1 * t * t)).collect();
        Self {
            m2,
            k1,
            b1,
            b2,
            b1_positive: m2 != 0.0,
            b2_side: crate::sign::Sign::of(k1, 0.0),
            b2_inside_b1: k1 > 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example::{self, q};
    use crate::sign::Sign;
    use crate::{Series, System};

    fn s(t: &str) -> Series {
        t.parse().unwrap()
    }

    #[test]
    fn forward_linear_part() {
        let (mu1, mu2) = build_forward(&example::system());
        assert_eq!(mu1.linear_part(), (q(-4, 1), q(-4, 1)));
        assert_eq!(mu2.linear_part(), (q(2, 1), q(3, 1)));
        assert_eq!(mu1.constant_term(), q(0, 1));
        let det = det2(&linear_matrix(&(mu1, mu2)));
        assert_eq!(det, q(-4, 1));
    }

    #[test]
    fn forward_trivial() {
        let sys = System::new(Series::zero(4), Series::zero(4), s("3"), 0.1).unwrap();
        let (a, b) = build_forward(&sys);
        assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn inverse_linear_and_quadratic() {
        let fwd = build_forward(&example::system());
        let (a1, a2) = invert_series(&fwd, 1).unwrap();
        assert_eq!(a1, s("-3/4*mu1 - mu2").truncate(1));
        assert_eq!(a2, s("1/2*mu1 + mu2").truncate(1));

        let (a1, a2) = invert_series(&fwd, 2).unwrap();
        assert_eq!(a1.coeff(2, 0), q(-261, 64));
        assert_eq!(a1.coeff(1, 1), q(-49, 4));
        assert_eq!(a1.coeff(0, 2), q(-10, 1));
        assert_eq!(a2.coeff(2, 0), q(89, 32));
        assert_eq!(a2.coeff(1, 1), q(17, 2));
        assert_eq!(a2.coeff(0, 2), q(7, 1));
    }

    #[test]
    fn identity_inverts_to_identity() {
        for k in 1..=4 {
            let id = (Series::var(0, 4), Series::var(1, 4));
            let inv = invert_series(&id, k).unwrap();
            assert_eq!(inv, (Series::var(0, k), Series::var(1, k)));
        }
    }

    #[test]
    fn inversion_errors() {
        let fwd = build_forward(&example::system());
        assert_eq!(
            invert_series(&fwd, 0).unwrap_err(),
            Error::InversionOrder { k: 0, order: 4 }
        );
        assert!(invert_series(&fwd, 5).is_err());
        let singular = (s("a1 + a2"), s("2*a1 + 2*a2 + a1^2"));
        assert_eq!(
            invert_series(&singular, 2).unwrap_err(),
            Error::Genericity(Condition::Regularity)
        );
    }

    #[test]
    fn round_trip_all_orders() {
        let sys = example::system();
        for k in 1..=4 {
            let t = ParameterTransform::new(&sys, k).unwrap();
            assert!(t.round_trip_exact(), "k = {k}");
        }
    }

    #[test]
    fn hat_functions_example() {
        let t = ParameterTransform::new(&example::system(), 2).unwrap();
        assert_eq!(lowest_terms(&t.hat.l2, 2), s("1 + 1/4*mu1 + mu2 + 5*mu2^2"));
        assert_eq!(lowest_terms(&t.hat.beta2, 2), s("-1/4*mu1 - 5*mu2^2"));
        // m2^2 / (4 L0) in front of mu2^4
        assert_eq!(lowest_terms(&t.hat.beta1, 4), s("-1/4*mu1 + 25/4*mu2^4"));
        // the mixed terms exist but are absorbed into mu1 (1 + O(|mu|))
        assert_eq!(t.hat.l2.coeff(2, 0), q(131, 64));
        assert_eq!(t.hat.l2.coeff(1, 1), q(25, 4));
        assert!(t.hat.discriminant_residual().is_zero());
        assert_eq!(t.constants.m2, Some(q(-5, 1)));
        assert_eq!(t.constants.k1, Some(q(-20, 1)));
        assert_eq!(t.jacobian_det0, q(-4, 1));
        assert!(t.degenerate);
    }

    #[test]
    fn beta1_routes_agree_through_k() {
        let sys = example::system();
        for k in 2..=4 {
            let t = ParameterTransform::new(&sys, k).unwrap();
            let direct = sys.beta1().compose(&t.inverse.0, &t.inverse.1).unwrap();
            let hat = hat_functions(&sys, &t.inverse).unwrap();
            assert_eq!(hat.beta1.truncate(k), direct, "k = {k}");
        }
    }

    #[test]
    fn hat_beta2_linear_part() {
        // -d1 / (4 L0 c1) mu1 with no mu2 term
        let sys = example::system();
        let t = ParameterTransform::new(&sys, 2).unwrap();
        assert_eq!(t.hat.beta2.linear_part(), (q(-1, 4), q(0, 1)));
    }

    #[test]
    fn m2_closed_form_example_and_zero() {
        assert_eq!(m2_closed_form(&example::system()).unwrap(), q(-5, 1));
        let flat = System::new(s("a1 + a2"), s("a1 + a2"), s("1 + a1 + 2*a2"), 0.1).unwrap();
        assert_eq!(m2_closed_form(&flat).unwrap(), q(0, 1));
        let t = ParameterTransform::new(&flat, 2).unwrap();
        assert_eq!(t.constants.m2, Some(q(0, 1)));
        assert_eq!(
            t.boundary_curves((-0.1, 0.1), 3).unwrap_err(),
            Error::Genericity(Condition::M2Nonzero)
        );
    }

    #[test]
    fn m2_closed_form_errors() {
        let no_c1 = System::new(s("a2"), s("a2"), s("1 + a1"), 0.1).unwrap();
        assert_eq!(
            m2_closed_form(&no_c1).unwrap_err(),
            Error::Genericity(Condition::C1Nonzero)
        );
        let bad_den = System::new(s("a1 + a2"), s("a1 + a2"), s("1 + a1 + a2"), 0.1).unwrap();
        assert_eq!(
            m2_closed_form(&bad_den).unwrap_err(),
            Error::Genericity(Condition::M2Denominator)
        );
    }

    #[test]
    fn k1_requires_order_two() {
        let sys = example::system_with_order(1);
        let t = ParameterTransform::new(&sys, 1).unwrap();
        assert_eq!(t.constants.m2, None);
        assert_eq!(t.constants.k1, None);
    }

    #[test]
    fn boundary_curves_example() {
        let t = ParameterTransform::new(&example::system(), 2).unwrap();
        let b = t.boundary_curves((-0.1, 0.1), 5).unwrap();
        assert_eq!(b.m2, -5.0);
        assert_eq!(b.k1, -20.0);
        assert_eq!(b.b2_side, Sign::Negative);
        assert!(b.b1_positive && !b.b2_inside_b1);
        assert_eq!(b.b1[2], (0.0, 0.0));
        assert_eq!(b.b2[2], (0.0, 0.0));
        assert!((b.b1[0].1 - 25.0 * 1e-4).abs() < 1e-15);
        assert!((b.b2[4].1 + 0.2).abs() < 1e-15);
        assert!(b.b1.iter().all(|p| p.1 >= 0.0));
        assert!(b.b2.iter().all(|p| p.1 <= 0.0));
    }

    #[test]
    fn boundary_curves_inside() {
        let b = BoundaryCurves::new(-1.0, 4.0, (-0.1, 0.1), 11);
        assert!(b.b2_inside_b1);
        assert_eq!(b.b2_side, Sign::Positive);
        for (p1, p2) in b.b1.iter().zip(&b.b2) {
            if p1.0 != 0.0 {
                assert!(p2.1 > p1.1 && p1.1 > 0.0);
            }
        }
    }

    #[test]
    fn mu_at_reference_point() {
        let (mu1, mu2) = mu_at(&example::system(), (-0.017f64, 0.015));
        assert!((mu1 - 4.8579e-3).abs() < 1e-7);
        assert!((mu2 - 1.0782e-2).abs() < 1e-6);
    }
}
