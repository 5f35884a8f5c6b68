use num_bigint::BigInt;
use proptest::prelude::*;
use ruth_core::symcore::{parse_poly, vars, Polynomial, Vars};
use ruth_core::Rat;

type P = Polynomial<Rat>;

fn xyz() -> Vars {
    vars(["x", "y", "z"])
}

fn poly_strategy() -> impl Strategy<Value = P> {
    let term = (-9i64..10, 1i64..5, prop::collection::vec(0u32..3, 3));
    prop::collection::vec(term, 0..6).prop_map(|terms| {
        P::from_terms(
            &xyz(),
            terms
                .into_iter()
                .map(|(n, d, e)| (e, Rat::new(BigInt::from(n), BigInt::from(d)))),
        )
        .unwrap()
    })
}

/// Evaluation at a rational point, computed term by term.
fn eval_oracle(p: &P, pt: &[Rat]) -> Rat {
    let mut out = Rat::from_integer(0.into());
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (x, &e) in pt.iter().zip(m.exponents()) {
            for _ in 0..e {
                t *= x;
            }
        }
        out += t;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn partials_commute(p in poly_strategy(), i in 0usize..3, j in 0usize..3) {
        prop_assert_eq!(p.deriv(i).deriv(j), p.deriv(j).deriv(i));
    }

    #[test]
    fn equality_is_mathematical(a in poly_strategy(), b in poly_strategy(), pt in prop::collection::vec(-3i64..4, 3)) {
        let pt: Vec<Rat> = pt.into_iter().map(|n| Rat::from_integer(n.into())).collect();
        let d = &a - &b;
        prop_assert_eq!(d.is_zero(), a == b);
        prop_assert_eq!(eval_oracle(&(&a * &b), &pt), eval_oracle(&a, &pt) * eval_oracle(&b, &pt));
        prop_assert_eq!(a.eval(&pt), eval_oracle(&a, &pt));
    }

    #[test]
    fn printing_round_trips(p in poly_strategy()) {
        let back: P = parse_poly(&p.to_string(), &xyz()).unwrap();
        prop_assert_eq!(back, p);
    }
}
