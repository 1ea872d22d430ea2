use chenciner::example::q;
use chenciner::{Rational, Series, System};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

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
