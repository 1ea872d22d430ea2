#![allow(dead_code)]

use chenciner::normal_form::{MapCoefficients, RootLabel, Stability};
use chenciner::{Rational, Series, System};
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

/// Random system of order 4 with small coefficients satisfying
/// `c1 d2 = c2 d1`, `c1 l2 != c2 l1`, `L0 != 0` and `c1, c2, d1, d2 != 0`.
pub fn degenerate_system(rng: &mut ChaCha8Rng) -> System {
    let (c1, c2) = (nonzero(rng, 3), nonzero(rng, 3));
    let lambda = q(nonzero(rng, 3), rng.gen_range(1..=2));
    let (l1, l2) = loop {
        let (a, b) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        if c1 * b != c2 * a {
            break (a, b);
        }
    };
    let l0 = nonzero(rng, 2);
    let higher = |rng: &mut ChaCha8Rng| {
        let mut t = Vec::new();
        for d in 2..=4u32 {
            for i in 0..=d {
                if rng.gen_bool(0.6) {
                    t.push(((i, d - i), small(rng)));
                }
            }
        }
        t
    };
    let mut b1 = vec![((1, 0), q(c1, 1)), ((0, 1), q(c2, 1))];
    b1.extend(higher(rng));
    let mut b2 = vec![((1, 0), q(c1, 1) * &lambda), ((0, 1), q(c2, 1) * &lambda)];
    b2.extend(higher(rng));
    let mut l = vec![((0, 0), q(l0, 1)), ((1, 0), q(l1, 1)), ((0, 1), q(l2, 1))];
    l.extend(higher(rng));
    System::new(
        Series::from_terms(4, b1),
        Series::from_terms(4, b2),
        Series::from_terms(4, l),
        0.1,
    )
    .expect("constructed system is valid")
}

/// Circles predicted by the case table for the signs of `(L0, beta1, beta2,
/// Delta)`: root label and the one-sided stability label.
pub fn case_table_circles(
    l0: f64,
    m: &MapCoefficients<f64>,
    tol: f64,
) -> Vec<(RootLabel, Stability)> {
    use RootLabel::*;
    use Stability::*;
    let s = |x: f64| {
        if x.abs() < tol {
            0
        } else if x > 0.0 {
            1
        } else {
            -1
        }
    };
    let (l, b1, b2, d) = (s(l0), s(m.beta1), s(m.beta2), s(m.delta()));
    if b1 == 0 {
        return match (l, b2) {
            (-1, 1) => vec![(Second, Stable)],
            (1, -1) => vec![(First, Unstable)],
            _ => vec![],
        };
    }
    match d {
        -1 => vec![],
        0 => {
            if l * b2 < 0 {
                vec![(Double, Unstable)]
            } else {
                vec![]
            }
        }
        _ => match (l, b1, b2) {
            (1, -1, _) => vec![(First, Unstable)],
            (-1, 1, _) => vec![(Second, Stable)],
            (1, 1, -1) | (-1, -1, 1) => vec![(First, Unstable), (Second, Stable)],
            _ => vec![],
        },
    }
}
