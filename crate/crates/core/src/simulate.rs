//! Orbit iteration at fixed `alpha` and checks of the predicted phase portrait.
//!
//! Outcomes are detected in three ways. Plain thresholds catch orbits that
//! reach the origin band or leave the escape radius. Certificates stop an orbit
//! early when it is visibly monotone and the radial growth `q(y) = beta1 +
//! beta2 y + L2 y^2` has a fixed sign over everything it can still reach, which
//! settles where it goes. Otherwise the run goes to `n_max`, and a flat trailing
//! window whose mean matches a known circle counts as convergence to it.

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{classify_alpha_point, Portrait, RegionLabel};
use crate::error::Result;
use crate::normal_form::{
    CircleCensus, MapCoefficients, NormalFormSystem, OriginStability, Stability,
};
use crate::scalar::{Coefficient, Scalar};
use crate::sign::Tolerances;
use crate::transform::ParameterTransform;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds<F> {
    /// `rho` below this is at the origin.
    pub origin: F,
    /// `rho` above this has escaped.
    pub escape: F,
    /// Trailing window length in steps.
    pub window: usize,
    /// Largest relative radius range over the window that counts as flat.
    pub circle_range: F,
    /// Largest relative distance from a census radius for a match.
    pub circle_match: F,
    pub n_max: usize,
    /// Allow early exits on certified monotone behaviour.
    pub certify: bool,
    /// Bands used for the census the orbit is matched against.
    pub tol: Tolerances<F>,
}

impl<F: Scalar> Default for Thresholds<F> {
    fn default() -> Self {
        Self {
            origin: F::lit(1e-6),
            escape: F::lit(10.0),
            window: 50,
            circle_range: F::lit(1e-4),
            circle_match: F::lit(1e-3),
            n_max: 5000,
            certify: true,
            tol: Tolerances::default(),
        }
    }
}

impl<F: Scalar> Thresholds<F> {
    pub fn with_steps(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn with_tol(mut self, tol: Tolerances<F>) -> Self {
        self.tol = tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome<F> {
    ToOrigin,
    ToCircle { radius: F },
    Escape,
    Undecided,
}

impl<F: Scalar> std::fmt::Display for Outcome<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::ToOrigin => f.write_str("origin"),
            Outcome::ToCircle { radius } => write!(f, "circle({:.6})", radius),
            Outcome::Escape => f.write_str("escape"),
            Outcome::Undecided => f.write_str("undecided"),
        }
    }
}

/// How an outcome was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    OriginBand,
    EscapeRadius,
    /// `rho` became nonpositive.
    LeftDomain,
    Certificate,
    FlatWindow,
    Exhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitPoint<F> {
    pub n: usize,
    pub rho: F,
    pub phi: F,
    pub x: F,
    pub y: F,
}

impl<F: Scalar> OrbitPoint<F> {
    fn new(n: usize, rho: F, phi: F) -> Self {
        Self {
            n,
            rho,
            phi,
            x: rho * phi.cos(),
            y: rho * phi.sin(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRecord<F> {
    pub alpha: (F, F),
    pub theta0: F,
    pub start: (F, F),
    /// Starting point first, numbered from 1.
    pub points: Vec<OrbitPoint<F>>,
    pub n_steps: usize,
    pub outcome: Outcome<F>,
    pub rule: Rule,
}

impl<F: Scalar> OrbitRecord<F> {
    pub fn final_rho(&self) -> F {
        self.points.last().expect("start point is recorded").rho
    }

    /// Whether every recorded point is the map image of the previous one.
    pub fn replays<C: Coefficient>(&self, sys: &NormalFormSystem<C>) -> bool {
        let m = sys.at(self.alpha);
        self.points.windows(2).all(|w| {
            let s = m.step(w[0].rho, w[0].phi, self.theta0);
            s.rho == w[1].rho && s.phi == w[1].phi
        })
    }
}

/// Minimum and maximum of `q` over `[a, b]`, with `b = inf` allowed.
fn q_range<F: Scalar>(m: &MapCoefficients<F>, a: F, b: F) -> (F, F) {
    let mut vals = vec![m.growth(a)];
    if b.is_finite() {
        vals.push(m.growth(b));
    } else if m.l2 > F::zero() {
        vals.push(F::infinity());
    } else if m.l2 < F::zero() {
        vals.push(F::neg_infinity());
    } else {
        vals.push(if m.beta2 >= F::zero() {
            F::infinity()
        } else {
            F::neg_infinity()
        });
    }
    if m.l2 != F::zero() {
        let v = -m.beta2 / (F::lit(2.0) * m.l2);
        if v > a && v < b {
            vals.push(m.growth(v));
        }
    }
    let lo = vals.iter().copied().fold(F::infinity(), F::min);
    let hi = vals.iter().copied().fold(F::neg_infinity(), F::max);
    (lo, hi)
}

fn certificate<F: Scalar>(
    m: &MapCoefficients<F>,
    w: &[F],
    th: &Thresholds<F>,
) -> Option<Outcome<F>> {
    let (first, last) = (w[0], w[w.len() - 1]);
    let y = last * last;
    if w.windows(2).all(|p| p[1] < p[0]) && (first - last) / first > th.circle_range {
        // rho' = rho (1 + q) lands in (0, rho) for every rho it can still reach
        let (lo, hi) = q_range(m, F::zero(), y);
        if hi < F::zero() && lo > -F::one() {
            return Some(Outcome::ToOrigin);
        }
    }
    if w.windows(2).all(|p| p[1] > p[0]) && (last - first) / last > th.circle_range {
        // no circle above, and growth without bound
        let (lo, _) = q_range(m, y, F::infinity());
        if m.l2 > F::zero() && lo > F::zero() {
            return Some(Outcome::Escape);
        }
    }
    None
}

/// Iterates the truncated map from `start = (rho1, phi1)` for up to
/// `th.n_max` steps.
pub fn iterate_orbit<C: Coefficient, F: Scalar>(
    sys: &NormalFormSystem<C>,
    alpha: (F, F),
    start: (F, F),
    th: &Thresholds<F>,
) -> OrbitRecord<F> {
    let m = sys.at(alpha);
    let theta0 = F::lit(sys.theta0());
    let mut points = vec![OrbitPoint::new(1, start.0, start.1)];
    let (mut rho, mut phi) = start;
    let mut decided = None;
    for n in 2..=th.n_max + 1 {
        if rho < th.origin {
            decided = Some((Outcome::ToOrigin, Rule::OriginBand));
            break;
        }
        if rho > th.escape {
            decided = Some((Outcome::Escape, Rule::EscapeRadius));
            break;
        }
        let s = m.step(rho, phi, theta0);
        (rho, phi) = (s.rho, s.phi);
        points.push(OrbitPoint::new(n, rho, phi));
        if rho <= F::zero() {
            decided = Some((Outcome::Escape, Rule::LeftDomain));
            break;
        }
        if th.certify && points.len() > th.window {
            let w: Vec<F> = points[points.len() - th.window - 1..]
                .iter()
                .map(|p| p.rho)
                .collect();
            if let Some(o) = certificate(&m, &w, th) {
                decided = Some((o, Rule::Certificate));
                break;
            }
        }
    }
    let (outcome, rule) = decided.unwrap_or_else(|| {
        if rho < th.origin {
            (Outcome::ToOrigin, Rule::OriginBand)
        } else if rho > th.escape {
            (Outcome::Escape, Rule::EscapeRadius)
        } else {
            flat_window(&m, &points, th)
        }
    });
    OrbitRecord {
        alpha,
        theta0,
        start,
        n_steps: points.len() - 1,
        points,
        outcome,
        rule,
    }
}

fn flat_window<F: Scalar>(
    m: &MapCoefficients<F>,
    points: &[OrbitPoint<F>],
    th: &Thresholds<F>,
) -> (Outcome<F>, Rule) {
    let undecided = (Outcome::Undecided, Rule::Exhausted);
    if th.window == 0 || points.len() < th.window {
        return undecided;
    }
    let w = &points[points.len() - th.window..];
    let lo = w.iter().map(|p| p.rho).fold(F::infinity(), F::min);
    let hi = w.iter().map(|p| p.rho).fold(F::neg_infinity(), F::max);
    let mean = w.iter().map(|p| p.rho).fold(F::zero(), |a, b| a + b) / F::lit(w.len() as f64);
    if mean <= F::zero() || (hi - lo) / mean >= th.circle_range {
        return undecided;
    }
    match m.census(&th.tol).ok().and_then(|c| c.nearest(mean)) {
        Some((_, d)) if d < th.circle_match => {
            (Outcome::ToCircle { radius: mean }, Rule::FlatWindow)
        }
        _ => undecided,
    }
}

/// Starting radii for portrait checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbePlan<F> {
    /// Include the bracketing starts derived from the census.
    pub bracket: bool,
    /// Additional starting radii.
    pub extra: Vec<F>,
    pub phi1: F,
}

impl<F: Scalar> Default for ProbePlan<F> {
    fn default() -> Self {
        Self {
            bracket: true,
            extra: Vec::new(),
            phi1: F::zero(),
        }
    }
}

impl<F: Scalar> ProbePlan<F> {
    pub fn with_extra(extra: &[F]) -> Self {
        Self {
            extra: extra.to_vec(),
            ..Self::default()
        }
    }

    /// Sorted, deduplicated starts for a census.
    ///
    /// Around a hyperbolic circle `r` the probes are `0.5 r`, `0.99 r` and
    /// `1.01 r`. Around a semi-stable circle they are `0.5 r`, `r` and `1.5 r`:
    /// the nearby pair would straddle the two roots that a slightly perturbed
    /// double root splits into. `1.5` times the outermost radius is always
    /// added, and `1e-3` stands in when there are no circles.
    pub fn starts(&self, census: &CircleCensus<F>) -> Vec<F> {
        let mut v = Vec::new();
        if self.bracket {
            let circles = census.by_radius();
            for c in &circles {
                let r = c.radius;
                let fs: [f64; 3] = match c.stability {
                    Stability::SemiStable(_) => [0.5, 1.0, 1.5],
                    _ => [0.5, 0.99, 1.01],
                };
                v.extend(fs.iter().map(|&f| F::lit(f) * r));
            }
            match circles.last() {
                Some(c) => v.push(F::lit(1.5) * c.radius),
                None => v.push(F::lit(1e-3)),
            }
        }
        v.extend(self.extra.iter().copied());
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite starts"));
        v.dedup_by(|a, b| (*a - *b).abs() <= F::lit(1e-6) * b.abs());
        v
    }
}

/// What a probe should do.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Expectation<F> {
    Origin,
    Circle {
        radius: F,
    },
    Escape,
    /// Started on a circle.
    Remain {
        radius: F,
    },
}

impl<F: Scalar> std::fmt::Display for Expectation<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expectation::Origin => f.write_str("origin"),
            Expectation::Circle { radius } => write!(f, "circle({:.6})", radius),
            Expectation::Escape => f.write_str("escape"),
            Expectation::Remain { radius } => write!(f, "remain({:.6})", radius),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Agree,
    /// Undecided, but moving toward the expected target.
    Slow,
    Undecided,
    Contradict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportStatus {
    Pass,
    /// More than half of the probes stayed undecided.
    Inconclusive,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResult<F> {
    pub start: F,
    pub expected: Expectation<F>,
    /// Every outcome consistent with the portrait, `expected` first.
    pub accepted: Vec<Expectation<F>>,
    pub observed: Outcome<F>,
    pub rule: Rule,
    pub n_steps: usize,
    pub final_rho: F,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PortraitReport<F> {
    pub alpha: (F, F),
    pub theta0: f64,
    pub mu: (F, F),
    pub label: RegionLabel,
    pub expected: Option<Portrait>,
    pub origin: OriginStability,
    pub census: CircleCensus<F>,
    /// Census and origin stability agree with the region's portrait.
    pub structure_ok: bool,
    pub probes: Vec<ProbeResult<F>>,
    pub status: ReportStatus,
}

/// Expected behaviour of a start given the origin and circles (inner first).
fn expectations<F: Scalar>(
    start: F,
    origin: Stability,
    circles: &[(F, Stability)],
    on_circle: F,
) -> Vec<Expectation<F>> {
    // expectation inside the interval whose lower feature is `lower`
    let interval = |lower: Option<usize>| -> Expectation<F> {
        let (attracts, target) = match lower {
            None => (origin == Stability::Stable, Expectation::Origin),
            Some(i) => (
                circles[i].1.attracts_from_outside(),
                Expectation::Circle {
                    radius: circles[i].0,
                },
            ),
        };
        if attracts {
            target
        } else {
            let next = lower.map_or(0, |i| i + 1);
            match circles.get(next) {
                Some(&(r, _)) => Expectation::Circle { radius: r },
                None => Expectation::Escape,
            }
        }
    };
    for (i, &(r, st)) in circles.iter().enumerate() {
        if ((start - r) / r).abs() < on_circle {
            let mut v = vec![Expectation::Remain { radius: r }];
            if !st.attracts_from_inside() {
                v.push(interval(i.checked_sub(1)));
            }
            if !st.attracts_from_outside() {
                v.push(interval(Some(i)));
            }
            return v;
        }
    }
    let lower = circles.iter().rposition(|&(r, _)| r < start);
    vec![interval(lower)]
}

fn matches<F: Scalar>(e: &Expectation<F>, o: &Outcome<F>, tol: F) -> bool {
    match (e, o) {
        (Expectation::Origin, Outcome::ToOrigin) | (Expectation::Escape, Outcome::Escape) => true,
        (
            Expectation::Circle { radius: r } | Expectation::Remain { radius: r },
            Outcome::ToCircle { radius },
        ) => ((*radius - *r) / *r).abs() < tol,
        _ => false,
    }
}

fn verdict<F: Scalar>(accepted: &[Expectation<F>], rec: &OrbitRecord<F>, tol: F) -> Verdict {
    if accepted.iter().any(|e| matches(e, &rec.outcome, tol)) {
        return Verdict::Agree;
    }
    if rec.outcome != Outcome::Undecided {
        return Verdict::Contradict;
    }
    let (s, f) = (rec.start.0, rec.final_rho());
    let toward = match accepted[0] {
        Expectation::Origin => f < s,
        Expectation::Escape => f > s,
        Expectation::Circle { radius } | Expectation::Remain { radius } => {
            (f - radius).abs() < (s - radius).abs()
        }
    };
    if toward {
        Verdict::Slow
    } else {
        Verdict::Undecided
    }
}

/// Classifies `alpha`, predicts the phase portrait and checks it with probe
/// orbits run in parallel.
pub fn verify_portrait<C: Coefficient, F: Scalar>(
    sys: &NormalFormSystem<C>,
    t: &ParameterTransform<C>,
    alpha: (F, F),
    plan: &ProbePlan<F>,
    th: &Thresholds<F>,
) -> Result<PortraitReport<F>> {
    let point = classify_alpha_point(sys, t, alpha, &th.tol)?;
    let m = sys.at(alpha);
    let census = m.census(&th.tol)?;
    let origin = sys.origin_stability(alpha, &th.tol);
    let expected = point.label.region.map(|r| r.portrait());
    let circles: Vec<(F, Stability)> = census
        .by_radius()
        .iter()
        .map(|c| (c.radius, c.stability))
        .collect();
    let structure_ok = expected.as_ref().is_some_and(|p| {
        p.origin == origin.stability
            && p.circles.len() == circles.len()
            && p.circles.iter().zip(&circles).all(|(a, b)| *a == b.1)
    });
    let origin_label = expected.as_ref().map_or(origin.stability, |p| p.origin);
    let starts = plan.starts(&census);
    let probes: Vec<ProbeResult<F>> = starts
        .par_iter()
        .map(|&s| {
            let accepted = expectations(s, origin_label, &circles, th.circle_match);
            let rec = iterate_orbit(sys, alpha, (s, plan.phi1), th);
            ProbeResult {
                start: s,
                expected: accepted[0],
                verdict: verdict(&accepted, &rec, th.circle_match),
                accepted,
                observed: rec.outcome,
                rule: rec.rule,
                n_steps: rec.n_steps,
                final_rho: rec.final_rho(),
            }
        })
        .collect();
    let undecided = probes
        .iter()
        .filter(|p| matches!(p.verdict, Verdict::Slow | Verdict::Undecided))
        .count();
    let status = if !structure_ok || probes.iter().any(|p| p.verdict == Verdict::Contradict) {
        ReportStatus::Fail
    } else if 2 * undecided > probes.len() {
        ReportStatus::Inconclusive
    } else {
        ReportStatus::Pass
    };
    Ok(PortraitReport {
        alpha,
        theta0: sys.theta0(),
        mu: point.mu,
        label: point.label,
        expected,
        origin,
        census,
        structure_ok,
        probes,
        status,
    })
}
