//! Region and diagram classification.
//!
//! A parameter point falls in one of eight regions according to the signs of
//! `(L0, Delta, beta1, beta2)`; the lookup table below is partial and any other
//! pattern is reported as unclassified. `(L0, m2)` picks one of four diagrams.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Condition, Error, Result};
use crate::normal_form::{MapCoefficients, NormalFormSystem, SemiStableSide, Stability};
use crate::scalar::{Coefficient, Scalar};
use crate::sign::{Sign, Tolerances};
use crate::transform::{mu_at, BoundaryCurves, ParameterTransform};

/// Signs of `(L0, Delta, beta1, beta2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SignPattern {
    pub l0: Sign,
    pub delta: Sign,
    pub beta1: Sign,
    pub beta2: Sign,
}

impl SignPattern {
    pub fn new(l0: Sign, delta: Sign, beta1: Sign, beta2: Sign) -> Self {
        Self {
            l0,
            delta,
            beta1,
            beta2,
        }
    }

    pub fn of<F: Scalar>(l0: F, delta: F, beta1: F, beta2: F, tol: &Tolerances<F>) -> Self {
        Self::new(
            Sign::of(l0, tol.beta),
            Sign::of(delta, tol.delta),
            Sign::of(beta1, tol.beta),
            Sign::of(beta2, tol.beta),
        )
    }

    /// Region from the table, if the pattern is listed.
    pub fn region(&self) -> Option<Region> {
        TABLE
            .iter()
            .find(|row| row.matches(self))
            .map(|row| row.region)
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.l0, self.delta, self.beta1, self.beta2
        )
    }
}

/// One of the eight generic regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Region(u8);

impl Region {
    pub const ALL: [Region; 8] = [
        Region(1),
        Region(2),
        Region(3),
        Region(4),
        Region(5),
        Region(6),
        Region(7),
        Region(8),
    ];

    pub fn new(n: u8) -> Option<Self> {
        (1..=8).contains(&n).then_some(Region(n))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    /// Phase portrait: stability of the origin and of the circles, innermost
    /// first.
    pub fn portrait(self) -> Portrait {
        use SemiStableSide::*;
        use Stability::*;
        let (origin, circles): (Stability, &[Stability]) = match self.0 {
            1 => (Stable, &[Unstable]),
            2 => (Unstable, &[]),
            3 => (Unstable, &[Stable]),
            4 => (Stable, &[]),
            5 => (Stable, &[SemiStable(InnerUnstable)]),
            6 => (Unstable, &[SemiStable(InnerStable)]),
            7 => (Stable, &[Unstable, Stable]),
            8 => (Unstable, &[Stable, Unstable]),
            _ => unreachable!("region numbers are 1..=8"),
        };
        Portrait {
            origin,
            circles: circles.to_vec(),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Portrait {
    pub origin: Stability,
    /// Innermost first.
    pub circles: Vec<Stability>,
}

/// Sign matcher for one table column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pat {
    Is(Sign),
    /// Any sign, zero included.
    Any,
}

impl Pat {
    fn matches(self, s: Sign) -> bool {
        match self {
            Pat::Is(t) => t == s,
            Pat::Any => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub l0: Sign,
    pub delta: Sign,
    pub beta1: Sign,
    pub beta2: Pat,
    pub region: Region,
}

impl TableRow {
    pub fn matches(&self, p: &SignPattern) -> bool {
        self.l0 == p.l0
            && self.delta == p.delta
            && self.beta1 == p.beta1
            && self.beta2.matches(p.beta2)
    }
}

const fn row(l0: Sign, delta: Sign, beta1: Sign, beta2: Pat, region: u8) -> TableRow {
    TableRow {
        l0,
        delta,
        beta1,
        beta2,
        region: Region(region),
    }
}

use Sign::{Negative as N, Positive as P, Zero as Z};

/// The 18 listed sign patterns. Rows are disjoint.
pub const TABLE: [TableRow; 18] = [
    row(N, N, N, Pat::Any, 4),
    row(N, P, N, Pat::Is(N), 4),
    row(N, Z, N, Pat::Is(N), 4),
    row(N, P, Z, Pat::Is(N), 4),
    row(N, Z, Z, Pat::Is(Z), 4),
    row(N, P, P, Pat::Any, 3),
    row(N, P, Z, Pat::Is(P), 3),
    row(N, P, N, Pat::Is(P), 7),
    row(N, Z, N, Pat::Is(P), 5),
    row(P, P, N, Pat::Any, 1),
    row(P, P, Z, Pat::Is(N), 1),
    row(P, N, P, Pat::Any, 2),
    row(P, P, P, Pat::Is(P), 2),
    row(P, Z, P, Pat::Is(P), 2),
    row(P, P, Z, Pat::Is(P), 2),
    row(P, Z, Z, Pat::Is(Z), 2),
    row(P, Z, P, Pat::Is(N), 6),
    row(P, P, P, Pat::Is(N), 8),
];

/// Region of a sign pattern, or `None` when the table does not list it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionLabel {
    pub region: Option<Region>,
    pub pattern: SignPattern,
}

impl RegionLabel {
    pub fn from_pattern(pattern: SignPattern) -> Self {
        Self {
            region: pattern.region(),
            pattern,
        }
    }

    pub fn number(&self) -> Option<u8> {
        self.region.map(Region::number)
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.region {
            Some(r) => write!(f, "{r}"),
            None => f.write_str("unclassified"),
        }
    }
}

/// Looks up the region of `(L0, Delta, beta1, beta2)`, reading values inside
/// the tolerance band as zero.
pub fn region_classify<F: Scalar>(
    l0: F,
    delta: F,
    beta1: F,
    beta2: F,
    tol: impl Into<Tolerances<F>>,
) -> Result<RegionLabel> {
    let tol = tol.into();
    let pattern = SignPattern::of(l0, delta, beta1, beta2, &tol);
    if pattern.l0.is_zero() {
        return Err(Error::ZeroL0);
    }
    Ok(RegionLabel::from_pattern(pattern))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Diagram {
    D1,
    D2,
    D3,
    D4,
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiagramLabel {
    pub diagram: Diagram,
    /// Sign of `c1 d1`. It moves `B2` within the diagram but does not change it.
    pub c1d1: Sign,
}

pub fn diagram_select(l0: Sign, m2: Sign, c1d1: Sign) -> Result<DiagramLabel> {
    if l0.is_zero() {
        return Err(Error::ZeroL0);
    }
    if m2.is_zero() {
        return Err(Error::Genericity(Condition::M2Nonzero));
    }
    if c1d1.is_zero() {
        return Err(Error::Genericity(Condition::C1D1Nonzero));
    }
    let diagram = match (l0, m2) {
        (Sign::Negative, Sign::Negative) => Diagram::D1,
        (Sign::Negative, _) => Diagram::D2,
        (_, Sign::Negative) => Diagram::D3,
        _ => Diagram::D4,
    };
    Ok(DiagramLabel { diagram, c1d1 })
}

impl<C: Coefficient> ParameterTransform<C> {
    /// Diagram from the exact constants.
    pub fn diagram(&self) -> Result<DiagramLabel> {
        let c = &self.constants;
        let m2 =
            c.m2.as_ref()
                .ok_or(Error::Genericity(Condition::M2Nonzero))?;
        diagram_select(
            Sign::exact(&c.l0),
            Sign::exact(m2),
            Sign::exact(&c.c1) * Sign::exact(&c.d1),
        )
    }
}

/// Classification of one `alpha` point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointClassification<F> {
    pub alpha: (F, F),
    pub mu: (F, F),
    /// `beta1`, `beta2`, `L2` at `alpha`.
    pub coefficients: MapCoefficients<F>,
    /// Hat functions at `mu`.
    pub hat: MapCoefficients<F>,
    /// Authoritative label from the signs at `alpha`.
    pub label: RegionLabel,
    /// Advisory label from the hat series at `mu`.
    pub hat_label: RegionLabel,
}

impl<F> PointClassification<F> {
    pub fn routes_agree(&self) -> bool {
        self.label.region == self.hat_label.region
    }
}

/// Classifies `alpha` by the signs of `L0`, `Delta(alpha)`, `beta1(alpha)` and
/// `beta2(alpha)`, and reports the hat-series view at `mu(alpha)` alongside.
pub fn classify_alpha_point<C: Coefficient, F: Scalar>(
    sys: &NormalFormSystem<C>,
    t: &ParameterTransform<C>,
    alpha: (F, F),
    tol: &Tolerances<F>,
) -> Result<PointClassification<F>> {
    let l0 = F::from_coefficient(&sys.l0());
    let coefficients = sys.at(alpha);
    let mu = mu_at(sys, alpha);
    let label = region_classify(l0, mu.0, coefficients.beta1, coefficients.beta2, *tol)?;
    let hat = t.hat.eval(mu);
    let hat_label = region_classify(l0, mu.0, hat.beta1, hat.beta2, *tol)?;
    Ok(PointClassification {
        alpha,
        mu,
        coefficients,
        hat,
        label,
        hat_label,
    })
}

/// Rectangle in the `mu` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub mu1: (f64, f64),
    pub mu2: (f64, f64),
}

impl Default for Window {
    fn default() -> Self {
        Self {
            mu1: (-0.01, 0.01),
            mu2: (-0.1, 0.1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RasterCell {
    pub mu1: f64,
    pub mu2: f64,
    pub label: RegionLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Raster {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    /// Row-major: `mu2` outer, `mu1` inner.
    pub cells: Vec<RasterCell>,
    pub curves: BoundaryCurves,
    pub diagram: DiagramLabel,
}

impl Raster {
    /// Distinct region numbers present, sorted.
    pub fn regions(&self) -> Vec<u8> {
        let mut v: Vec<u8> = self.cells.iter().filter_map(|c| c.label.number()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Grid nodes along one axis: both ends included, or the midpoint when `n = 1`.
fn axis(range: (f64, f64), n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![(range.0 + range.1) / 2.0],
        n => (0..n)
            .map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Classifies a grid over `window` with the hat series (`Delta = mu1`) and
/// samples the boundary curves across the same `mu2` range.
pub fn diagram_raster<C: Coefficient>(
    t: &ParameterTransform<C>,
    window: Window,
    resolution: (usize, usize),
    tol: &Tolerances<f64>,
    curve_samples: usize,
) -> Result<Raster> {
    let curves = t.boundary_curves(window.mu2, curve_samples)?;
    let diagram = t.diagram()?;
    let l0 = f64::from_coefficient(&t.constants.l0);
    let (nx, ny) = resolution;
    let xs = axis(window.mu1, nx);
    let ys = axis(window.mu2, ny);
    let cells = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (mu1, mu2) = (xs[idx % nx], ys[idx / nx]);
            let hat = t.hat.eval((mu1, mu2));
            let label =
                RegionLabel::from_pattern(SignPattern::of(l0, mu1, hat.beta1, hat.beta2, tol));
            RasterCell { mu1, mu2, label }
        })
        .collect();
    Ok(Raster {
        window,
        nx,
        ny,
        cells,
        curves,
        diagram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example;

    fn sp(l0: Sign, d: Sign, b1: Sign, b2: Sign) -> Option<u8> {
        SignPattern::new(l0, d, b1, b2).region().map(Region::number)
    }

    #[test]
    fn listed_examples() {
        assert_eq!(sp(P, P, N, P), Some(1));
        assert_eq!(sp(P, P, N, Z), Some(1));
        assert_eq!(sp(N, Z, Z, Z), Some(4));
        assert_eq!(sp(P, P, P, N), Some(8));
        assert_eq!(sp(N, P, N, P), Some(7));
        assert_eq!(sp(P, Z, P, N), Some(6));
        assert_eq!(sp(N, Z, N, P), Some(5));
    }

    #[test]
    fn unlisted_patterns() {
        assert_eq!(sp(N, Z, Z, P), None);
        assert_eq!(sp(N, N, Z, N), None);
        assert_eq!(sp(P, N, N, P), None);
        let l = region_classify(-1.0, 0.0, 0.0, 0.5, 1e-9).unwrap();
        assert_eq!(l.region, None);
        assert_eq!(l.to_string(), "unclassified");
    }

    #[test]
    fn rows_are_disjoint() {
        let signs = [N, Z, P];
        let mut listed = 0;
        for l0 in [N, P] {
            for d in signs {
                for b1 in signs {
                    for b2 in signs {
                        let p = SignPattern::new(l0, d, b1, b2);
                        let hits = TABLE.iter().filter(|r| r.matches(&p)).count();
                        assert!(hits <= 1, "{p} matches {hits} rows");
                        listed += hits;
                    }
                }
            }
        }
        // 4 rows cover three beta2 signs each
        assert_eq!(listed, 14 + 4 * 3);
    }

    #[test]
    fn tolerance_band() {
        let l = region_classify(
            1.0,
            1e-7,
            1e-3,
            -1e-3,
            Tolerances::uniform(1e-9).with_delta(1e-5),
        )
        .unwrap();
        assert_eq!(l.number(), Some(6));
        assert_eq!(
            region_classify(1e-12, 1.0, 1.0, 1.0, 1e-9).unwrap_err(),
            Error::ZeroL0
        );
    }

    #[test]
    fn diagrams() {
        assert_eq!(diagram_select(P, N, P).unwrap().diagram, Diagram::D3);
        assert_eq!(diagram_select(N, N, P).unwrap().diagram, Diagram::D1);
        assert_eq!(diagram_select(N, P, N).unwrap().diagram, Diagram::D2);
        assert_eq!(diagram_select(P, P, N).unwrap().diagram, Diagram::D4);
        assert_eq!(
            diagram_select(P, Z, P).unwrap_err(),
            Error::Genericity(Condition::M2Nonzero)
        );
        assert_eq!(diagram_select(Z, P, P).unwrap_err(), Error::ZeroL0);
        assert_eq!(
            diagram_select(P, P, Z).unwrap_err(),
            Error::Genericity(Condition::C1D1Nonzero)
        );
        let t = ParameterTransform::new(&example::system(), 2).unwrap();
        assert_eq!(
            t.diagram().unwrap(),
            DiagramLabel {
                diagram: Diagram::D3,
                c1d1: P
            }
        );
    }

    #[test]
    fn portraits() {
        for r in Region::ALL {
            let p = r.portrait();
            assert!(p.circles.len() <= 2);
        }
        assert_eq!(Region::new(8).unwrap().portrait().circles.len(), 2);
        assert_eq!(Region::new(9), None);
    }

    #[test]
    fn reference_points() {
        let sys = example::system();
        let t = ParameterTransform::new(&sys, 2).unwrap();
        for p in example::reference_points() {
            let tol = Tolerances::default().with_delta(p.delta_tol);
            let c = classify_alpha_point(&sys, &t, p.alpha, &tol).unwrap();
            assert_eq!(c.label.number(), Some(p.region), "{}", p.name);
        }
    }

    #[test]
    fn raster_window_regions() {
        let t = ParameterTransform::new(&example::system(), 2).unwrap();
        let r =
            diagram_raster(&t, Window::default(), (81, 81), &Tolerances::default(), 21).unwrap();
        assert_eq!(r.regions(), vec![1, 2, 6, 8]);
        assert_eq!(r.cells.len(), 81 * 81);

        let neg = Window {
            mu1: (-0.01, -0.001),
            mu2: (-0.1, 0.1),
        };
        let r = diagram_raster(&t, neg, (15, 15), &Tolerances::default(), 3).unwrap();
        assert_eq!(r.regions(), vec![2]);

        let r = diagram_raster(&t, neg, (1, 1), &Tolerances::default(), 3).unwrap();
        assert_eq!(r.cells.len(), 1);
        assert_eq!(r.cells[0].mu2, 0.0);
    }
}
