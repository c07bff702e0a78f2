use std::collections::BTreeMap;

use proptest::prelude::*;

use tropbt::gw::{signed_count, trace_deg2, GWElement};
use tropbt::quartic::{double_area, lattice_points, newton_subdivision, parse_quartic, Initial, PuiseuxCoeff, QuarticInput};
use tropbt::residue::{legendre, Rational, ResidueField};

fn nonzero() -> impl Strategy<Value = i128> {
    (1i128..=60).prop_flat_map(|v| prop_oneof![Just(v), Just(-v)])
}

fn field() -> impl Strategy<Value = ResidueField> {
    prop_oneof![
        Just(ResidueField::Reals),
        Just(ResidueField::Rationals),
        Just(ResidueField::Prime(5)),
        Just(ResidueField::Prime(7)),
        Just(ResidueField::Prime(13)),
    ]
}

fn gw(k: ResidueField) -> impl Strategy<Value = GWElement> {
    (0u32..3, prop::collection::vec(nonzero(), 0..5)).prop_map(move |(h, reps)| {
        // multiples of p vanish in F_p and have no class
        let classes = reps.into_iter().filter_map(|a| k.class_of_rational(&Rational::from_integer(a)).ok());
        classes.fold(GWElement::hyperbolic(h), |acc, c| acc.add(&GWElement::class(c), k))
    })
}

fn heights() -> impl Strategy<Value = BTreeMap<(i64, i64), Rational>> {
    prop::collection::vec((-40i128..=40, 1i128..=3), 15).prop_map(|v| {
        lattice_points(4).into_iter().zip(v).map(|(p, (n, d))| (p, Rational::new(n, d))).collect()
    })
}

proptest! {
    #[test]
    fn legendre_is_multiplicative(a in 1i128..500, b in 1i128..500, p in prop::sample::select(vec![5u64, 7, 11, 13, 101])) {
        prop_assume!(a % p as i128 != 0 && b % p as i128 != 0);
        let lhs = legendre(a * b, p).unwrap();
        prop_assert_eq!(lhs, legendre(a, p).unwrap() * legendre(b, p).unwrap());
    }

    #[test]
    fn gw_degree_is_additive((k, x, y) in field().prop_flat_map(|k| (Just(k), gw(k), gw(k)))) {
        prop_assert_eq!(x.add(&y, k).degree(), x.degree() + y.degree());
        prop_assert!(x.add(&y, k).equivalent(&y.add(&x, k), k));
    }

    #[test]
    fn normalization_is_idempotent((k, x) in field().prop_flat_map(|k| (Just(k), gw(k)))) {
        let once = x.clone().normalized(k);
        prop_assert_eq!(once.clone().normalized(k), once);
    }

    #[test]
    fn real_signed_count_is_additive(x in gw(ResidueField::Reals), y in gw(ResidueField::Reals)) {
        let k = ResidueField::Reals;
        let s = |g: &GWElement| signed_count(g, k).unwrap();
        prop_assert_eq!(s(&x.add(&y, k)), s(&x) + s(&y));
    }

    #[test]
    fn traces_have_degree_two(r in -20i128..=20, s in nonzero(), b in prop::sample::select(vec![-1i128, -3, 2, 3, 5])) {
        let k = ResidueField::Rationals;
        let t = trace_deg2(&Rational::from_integer(r), &Rational::from_integer(s), &Rational::from_integer(b), k).unwrap();
        prop_assert_eq!(t.degree(), 2);
        if r == 0 {
            prop_assert!(t.equivalent(&GWElement::hyperbolic(1), k));
        }
    }

    #[test]
    fn subdivisions_tile_the_triangle(h in heights()) {
        let s = newton_subdivision(&h);
        let area: i64 = s.faces.iter().map(|f| double_area(f)).sum();
        prop_assert_eq!(area, 16);
    }

    #[test]
    fn quartic_text_round_trips(v in prop::collection::vec((-40i128..=40, 1i128..=4, nonzero()), 15)) {
        let coeffs = lattice_points(4)
            .into_iter()
            .zip(v)
            .map(|(p, (n, d, a))| {
                let c = PuiseuxCoeff { valuation: Rational::new(n, d), initial: Initial::Value(Rational::from_integer(a)) };
                (p, c)
            })
            .collect();
        let q = QuarticInput::new(4, coeffs).unwrap();
        prop_assert_eq!(parse_quartic(&q.to_text()).unwrap(), q);
    }
}
