use abscroll_core::trunc_ring::{RingShape, TruncPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn poly_in(shape: RingShape) -> impl Strategy<Value = TruncPoly> {
    prop::collection::vec((0..=shape.c_cap, 0..=shape.h_cap, rational()), 0..6)
        .prop_map(move |terms| TruncPoly::from_terms(shape, terms).unwrap())
}

fn unit_in(shape: RingShape) -> impl Strategy<Value = TruncPoly> {
    (
        poly_in(shape),
        rational().prop_filter("nonzero", |a| *a != BigRational::from_integer(0.into())),
    )
        .prop_map(move |(p, a0)| {
            let constant = TruncPoly::constant(shape, a0 - p.constant_term());
            &p + &constant
        })
}

fn shape() -> impl Strategy<Value = RingShape> {
    (0u32..4, 0u32..4).prop_map(|(c, h)| RingShape::new(c, h))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms((a, b, c) in shape().prop_flat_map(|s| (poly_in(s), poly_in(s), poly_in(s)))) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&TruncPoly::one(a.shape()) * &a, a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn units_invert(u in shape().prop_flat_map(unit_in)) {
        let inv = u.power_signed(-1).unwrap();
        prop_assert_eq!(&u * &inv, TruncPoly::one(u.shape()));
    }

    #[test]
    fn signed_powers_add(u in shape().prop_flat_map(unit_in), a in -4i64..=4, b in -4i64..=4) {
        let lhs = u.power_signed(a + b).unwrap();
        let rhs = &u.power_signed(a).unwrap() * &u.power_signed(b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncation_commutes_with_products(
        (a, b) in (poly_in(RingShape::new(4, 4)), poly_in(RingShape::new(4, 4))),
        small in (0u32..=4, 0u32..=4),
    ) {
        let small = RingShape::new(small.0, small.1);
        let big_then_cut = (&a * &b).truncate_to(small);
        let cut_then_mul = &a.truncate_to(small) * &b.truncate_to(small);
        prop_assert_eq!(big_then_cut, cut_then_mul);
    }

    #[test]
    fn powers_by_squaring_match_repeated_products(p in poly_in(RingShape::new(3, 3)), e in 0u64..12) {
        let mut acc = TruncPoly::one(p.shape());
        for _ in 0..e {
            acc = &acc * &p;
        }
        prop_assert_eq!(p.power(e), acc);
    }
}
