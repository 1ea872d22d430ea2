mod common;

use chenciner::series::BivariateSeries;
use chenciner::{Rational, Series};
use common::q;
use proptest::prelude::*;

fn series(order: u32, max_degree: u32) -> impl Strategy<Value = Series> {
    prop::collection::vec((0..=max_degree, 0..=max_degree, -9i64..=9, 1i64..=6), 0..10).prop_map(
        move |terms| {
            let terms = terms
                .into_iter()
                .filter(|(i, j, _, _)| i + j <= max_degree)
                .map(|(i, j, n, d)| ((i, j), q(n, d)));
            Series::from_terms(order, terms)
        },
    )
}

/// Direct monomial sum, the reference for `eval`.
fn naive_eval(s: &Series, x1: f64, x2: f64) -> f64 {
    use num_traits::ToPrimitive;
    s.terms()
        .map(|((i, j), c)| c.to_f64().unwrap() * x1.powi(i as i32) * x2.powi(j as i32))
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in series(4, 4), b in series(4, 4), c in series(4, 4)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &Series::zero(4), a.clone());
        prop_assert_eq!(&a * &Series::one(4), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn truncation_commutes(a in series(8, 4), b in series(8, 4), k in 0u32..=4) {
        prop_assert_eq!((&a + &b).truncate(k), &a.truncate(k) + &b.truncate(k));
        // degree <= 4 inputs at order 8 multiply without loss
        let exact = &a * &b;
        prop_assert_eq!(exact.truncate(k), &a.truncate(k) * &b.truncate(k));
        prop_assert_eq!(exact.truncate(k).order(), k);
    }

    #[test]
    fn eval_is_homomorphism_up_to_dropped_terms(
        a in series(8, 4),
        b in series(8, 4),
        x1 in -0.1f64..0.1,
        x2 in -0.1f64..0.1,
    ) {
        let (a4, b4) = (a.truncate(4), b.truncate(4));
        let exact = &a * &b;
        let dropped = &exact - &exact.truncate(4).with_order(8);
        let bound: f64 = dropped
            .terms()
            .map(|((i, j), c)| {
                use num_traits::{Signed, ToPrimitive};
                c.abs().to_f64().unwrap() * x1.abs().powi(i as i32) * x2.abs().powi(j as i32)
            })
            .sum();
        let lhs = (&a4 * &b4).eval(x1, x2);
        let rhs = a4.eval(x1, x2) * b4.eval(x1, x2);
        prop_assert!((lhs - rhs).abs() <= bound + 1e-12, "{} > {}", (lhs - rhs).abs(), bound);
    }

    #[test]
    fn eval_matches_monomial_sum(a in series(4, 4), x1 in -1.0f64..1.0, x2 in -1.0f64..1.0) {
        prop_assert!((a.eval(x1, x2) - naive_eval(&a, x1, x2)).abs() < 1e-10);
    }

    #[test]
    fn reciprocal_inverts_units(a in series(4, 4), c0 in 1i64..5) {
        let mut u = a.clone();
        u = &u - &Series::constant(u.constant_term(), 4);
        u = &u + &Series::constant(q(c0, 1), 4);
        let r = u.reciprocal().unwrap();
        prop_assert_eq!(&u * &r, Series::one(4));
    }

    #[test]
    fn composition_respects_products(
        a in series(4, 4),
        b in series(4, 4),
        s1 in series(4, 3),
        s2 in series(4, 3),
    ) {
        let s1 = &s1 - &Series::constant(s1.constant_term(), 4);
        let s2 = &s2 - &Series::constant(s2.constant_term(), 4);
        let lhs = (&a * &b).compose(&s1, &s2).unwrap();
        let rhs = &a.compose(&s1, &s2).unwrap() * &b.compose(&s1, &s2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_round_trips(a in series(4, 4)) {
        let text = a.to_string();
        let back: Series = text.parse().unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn generic_over_fixed_width_rationals() {
    use num_rational::Ratio;
    let a: BivariateSeries<Ratio<i64>> =
        BivariateSeries::from_terms(3, [((0, 0), Ratio::new(1, 1)), ((1, 0), Ratio::new(1, 2))]);
    let r = a.reciprocal().unwrap();
    assert_eq!(r.coeff(3, 0), Ratio::new(-1, 8));
    let big: Series = "1 + 1/2*a1".parse().unwrap();
    let rb = big.truncate(3).reciprocal().unwrap();
    assert_eq!(rb.coeff(3, 0), Rational::new((-1).into(), 8.into()));
}
