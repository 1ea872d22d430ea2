//! Truncated power series in two variables.
//!
//! A [`BivariateSeries`] stores the coefficients of `x1^i x2^j` for
//! `i + j <= order` sparsely. Absent entries are exact zeros and no zero is
//! ever stored. Binary operations work at the smaller order of their operands;
//! the only ways to change the order of a series are [`BivariateSeries::truncate`]
//! and [`BivariateSeries::with_order`].

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Coefficient, Scalar};

pub use parse::SeriesTerm;

/// Order used when none is given.
pub const DEFAULT_ORDER: u32 = 4;

/// Largest supported truncation order.
pub const MAX_ORDER: u32 = 8;

/// Exponent pair `(i, j)` of the monomial `x1^i x2^j`.
pub type Exponent = (u32, u32);

#[derive(Clone, PartialEq)]
pub struct BivariateSeries<C> {
    order: u32,
    coeffs: BTreeMap<Exponent, C>,
}

/// Checks a user-supplied order.
pub fn check_order(order: u32) -> Result<u32> {
    if order > MAX_ORDER {
        Err(Error::UnsupportedOrder(order))
    } else {
        Ok(order)
    }
}

impl<C: Coefficient> BivariateSeries<C> {
    /// The zero series. Panics if `order > MAX_ORDER`.
    pub fn zero(order: u32) -> Self {
        assert!(
            order <= MAX_ORDER,
            "series order {order} exceeds {MAX_ORDER}"
        );
        Self {
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: C, order: u32) -> Self {
        Self::monomial(0, 0, c, order)
    }

    pub fn one(order: u32) -> Self {
        Self::constant(C::one(), order)
    }

    /// `c x1^i x2^j`, or zero when `i + j > order`.
    pub fn monomial(i: u32, j: u32, c: C, order: u32) -> Self {
        let mut s = Self::zero(order);
        s.insert_add((i, j), c);
        s
    }

    /// The first (`index = 0`) or second (`index = 1`) variable.
    pub fn var(index: usize, order: u32) -> Self {
        match index {
            0 => Self::monomial(1, 0, C::one(), order),
            1 => Self::monomial(0, 1, C::one(), order),
            _ => panic!("bivariate series has variables 0 and 1, got {index}"),
        }
    }

    /// Collects terms, summing repeated exponents and dropping those above `order`.
    pub fn from_terms<I>(order: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, C)>,
    {
        let mut s = Self::zero(order);
        for (e, c) in terms {
            s.insert_add(e, c);
        }
        s
    }

    fn insert_add(&mut self, (i, j): Exponent, c: C) {
        if i + j > self.order || c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&(i, j)) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.coeffs.remove(&(i, j));
                }
            }
            None => {
                self.coeffs.insert((i, j), c);
            }
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficient of `x1^i x2^j`; zero when absent.
    pub fn coeff(&self, i: u32, j: u32) -> C {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(C::zero)
    }

    pub fn get(&self, i: u32, j: u32) -> Option<&C> {
        self.coeffs.get(&(i, j))
    }

    /// Nonzero terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &C)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Nonzero terms by increasing total degree, then decreasing power of `x1`.
    pub fn graded_terms(&self) -> Vec<(Exponent, &C)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by_key(|&((i, j), _)| (i + j, std::cmp::Reverse(i)));
        v
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> C {
        self.coeff(0, 0)
    }

    /// Coefficients of `x1` and `x2`.
    pub fn linear_part(&self) -> (C, C) {
        (self.coeff(1, 0), self.coeff(0, 1))
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        Self {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&(i, j), _)| i + j == d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Highest total degree with a nonzero coefficient.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(i, j)| i + j).max()
    }

    /// Lowest total degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(i, j)| i + j).min()
    }

    /// Drops everything above `order`. Never raises the order.
    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        Self {
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&(i, j), _)| i + j <= order)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Re-declares the order. Lowering truncates; raising reads the stored
    /// terms as an exact polynomial, i.e. the new higher coefficients are zero.
    pub fn with_order(&self, order: u32) -> Self {
        assert!(
            order <= MAX_ORDER,
            "series order {order} exceeds {MAX_ORDER}"
        );
        if order <= self.order {
            return self.truncate(order);
        }
        Self {
            order,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.order);
        }
        Self {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (*e, c.clone() * k.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `self(sub1, sub2)`, truncated to the smallest of the three orders.
    ///
    /// Both substitutions must vanish at the origin.
    pub fn compose(&self, sub1: &Self, sub2: &Self) -> Result<Self> {
        if !sub1.constant_term().is_zero() || !sub2.constant_term().is_zero() {
            return Err(Error::ShiftedComposition);
        }
        let order = self.order.min(sub1.order).min(sub2.order);
        let powers = |s: &Self| {
            let s = s.truncate(order);
            let mut p = vec![Self::one(order)];
            for k in 1..=order as usize {
                let next = &p[k - 1] * &s;
                p.push(next);
            }
            p
        };
        let p1 = powers(sub1);
        let p2 = powers(sub2);
        let mut out = Self::zero(order);
        for (&(i, j), c) in &self.coeffs {
            if i + j > order {
                continue;
            }
            let term = (&p1[i as usize] * &p2[j as usize]).scale(c);
            out = &out + &term;
        }
        Ok(out)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotUnit);
        }
        let inv0 = C::one() / c0.clone();
        // self = c0 (1 + u) with u(0) = 0, so 1/self = (1/c0) sum (-u)^n.
        let mut u = self.scale(&inv0);
        u.coeffs.remove(&(0, 0));
        let neg_u = -&u;
        let mut term = Self::one(self.order);
        let mut acc = Self::one(self.order);
        for _ in 0..self.order {
            term = &term * &neg_u;
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(acc.scale(&inv0))
    }

    /// `self / rhs`; requires `rhs` to have a nonzero constant term.
    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.reciprocal()?)
    }

    /// Evaluates at `(x1, x2)` in floating point.
    ///
    /// Coefficients are rounded to `F` once each and the polynomial is summed by
    /// nested Horner: outer in `x1`, inner in `x2`.
    pub fn eval<F: Scalar>(&self, x1: F, x2: F) -> F {
        let Some(max_i) = self.coeffs.keys().map(|&(i, _)| i).max() else {
            return F::zero();
        };
        let mut acc = F::zero();
        for i in (0..=max_i).rev() {
            let row: Vec<(u32, F)> = self
                .coeffs
                .range((i, 0)..=(i, u32::MAX))
                .map(|(&(_, j), c)| (j, F::from_coefficient(c)))
                .collect();
            let mut inner = F::zero();
            if let Some(&(max_j, _)) = row.last() {
                let mut k = row.len();
                for j in (0..=max_j).rev() {
                    let c = if k > 0 && row[k - 1].0 == j {
                        k -= 1;
                        row[k].1
                    } else {
                        F::zero()
                    };
                    inner = inner * x2 + c;
                }
            }
            acc = acc * x1 + inner;
        }
        acc
    }

    /// Formats with the given variable names, e.g. `["mu1", "mu2"]`.
    pub fn display_with<'a>(&'a self, names: [&'a str; 2]) -> impl fmt::Display + 'a {
        SeriesDisplay {
            series: self,
            names,
        }
    }

    /// Coefficients as `(i, j, "num/den")` entries for reports.
    pub fn entries(&self) -> Vec<CoefficientEntry> {
        self.graded_terms()
            .into_iter()
            .map(|((i, j), c)| CoefficientEntry {
                i,
                j,
                value: c.to_string(),
            })
            .collect()
    }
}

/// One coefficient in report form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub i: u32,
    pub j: u32,
    pub value: String,
}

struct SeriesDisplay<'a, C> {
    series: &'a BivariateSeries<C>,
    names: [&'a str; 2],
}

impl<C: Coefficient> fmt::Display for SeriesDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.series.graded_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (n, ((i, j), c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (n, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors = Vec::new();
            if i + j == 0 || !mag.is_one() {
                factors.push(mag.to_string());
            }
            for (name, p) in self.names.iter().zip([i, j]) {
                match p {
                    0 => {}
                    1 => factors.push((*name).to_string()),
                    _ => factors.push(format!("{name}^{p}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Display for BivariateSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(["a1", "a2"]))
    }
}

impl<C: Coefficient> fmt::Debug for BivariateSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivariateSeries[order {}]({})", self.order, self)
    }
}

impl<C: Coefficient> Add for &BivariateSeries<C> {
    type Output = BivariateSeries<C>;

    fn add(self, rhs: Self) -> BivariateSeries<C> {
        let order = self.order.min(rhs.order);
        let mut out = self.truncate(order);
        for (e, c) in rhs.terms() {
            out.insert_add(e, c.clone());
        }
        out
    }
}

impl<C: Coefficient> Neg for &BivariateSeries<C> {
    type Output = BivariateSeries<C>;

    fn neg(self) -> BivariateSeries<C> {
        BivariateSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl<C: Coefficient> Sub for &BivariateSeries<C> {
    type Output = BivariateSeries<C>;

    fn sub(self, rhs: Self) -> BivariateSeries<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Mul for &BivariateSeries<C> {
    type Output = BivariateSeries<C>;

    fn mul(self, rhs: Self) -> BivariateSeries<C> {
        let order = self.order.min(rhs.order);
        let mut out = BivariateSeries::zero(order);
        for (&(i1, j1), a) in &self.coeffs {
            for (&(i2, j2), b) in &rhs.coeffs {
                if i1 + j1 + i2 + j2 <= order {
                    out.insert_add((i1 + i2, j1 + j2), a.clone() * b.clone());
                }
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($Op:ident, $op:ident) => {
        impl<C: Coefficient> $Op for BivariateSeries<C> {
            type Output = BivariateSeries<C>;

            fn $op(self, rhs: Self) -> BivariateSeries<C> {
                (&self).$op(&rhs)
            }
        }

        impl<C: Coefficient> $Op<&BivariateSeries<C>> for BivariateSeries<C> {
            type Output = BivariateSeries<C>;

            fn $op(self, rhs: &BivariateSeries<C>) -> BivariateSeries<C> {
                (&self).$op(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<C: Coefficient> Neg for BivariateSeries<C> {
    type Output = BivariateSeries<C>;

    fn neg(self) -> BivariateSeries<C> {
        -&self
    }
}
