//! Property suite for the exact series algebra.

use nilcycle_core::rational::{rat, Rational};
use nilcycle_core::series::Series;
use num::Zero;
use proptest::prelude::*;

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

fn series_strategy(order: usize) -> impl Strategy<Value = Series> {
    proptest::collection::vec(rational_strategy(), order + 1).prop_map(Series::from_coeffs)
}

/// Series with f(0) = 0, f'(0) != 0: the domain of reversion.
fn invertible_strategy(order: usize) -> impl Strategy<Value = Series> {
    (
        proptest::collection::vec(rational_strategy(), order - 1),
        (-6i64..=6).prop_filter("nonzero linear term", |p| *p != 0),
        1i64..=4,
    )
        .prop_map(move |(tail, p, q)| {
            let mut coeffs = vec![Rational::new(0.into(), 1.into()), rat(p, q)];
            coeffs.extend(tail);
            Series::from_coeffs(coeffs)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mul_commutative(a in series_strategy(12), b in series_strategy(12)) {
        prop_assert_eq!(a.mul_series(&b), b.mul_series(&a));
    }

    #[test]
    fn mul_associative(a in series_strategy(10), b in series_strategy(10), c in series_strategy(10)) {
        prop_assert_eq!(a.mul_series(&b).mul_series(&c), a.mul_series(&b.mul_series(&c)));
    }

    #[test]
    fn mul_distributes_over_add(a in series_strategy(10), b in series_strategy(10), c in series_strategy(10)) {
        let lhs = a.mul_series(&(&b + &c));
        let rhs = &a.mul_series(&b) + &a.mul_series(&c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_with_reversion_is_identity(f in invertible_strategy(10)) {
        let g = f.reversion().unwrap();
        prop_assert_eq!(f.compose(&g).unwrap(), Series::identity(10));
        prop_assert_eq!(g.compose(&f).unwrap(), Series::identity(10));
    }

    #[test]
    fn root_k_power_round_trip(h in series_strategy(9), k in 1u32..=4) {
        // Build f = x^(k*m) (1 + x h) with unit leading coefficient.
        let one_plus = Series::constant(rat(1, 1), 10) + h.shift_up(1).truncated(10);
        let f = one_plus.shift_up(2 * k as usize);
        let r = f.root(k).unwrap();
        prop_assert!(r.tag.is_one());
        let p = r.pow_series(k);
        prop_assert_eq!(p.series.clone(), f.truncated(p.series.order()));
    }

    #[test]
    fn derivative_of_integral(f in series_strategy(14)) {
        prop_assert_eq!(f.integrate().differentiate(), f);
    }

    #[test]
    fn division_round_trip(a in series_strategy(10), b in series_strategy(10)) {
        prop_assume!(!b.coeff(0).is_zero());
        let q = a.div_series(&b).unwrap();
        prop_assert_eq!(q.mul_series(&b), a);
    }
}
