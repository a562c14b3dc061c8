use num_bigint::BigInt;
use proptest::prelude::*;
use rjw_core::numeric::{arith, normalize, ArithOp, NumericError, TwoLocalNumber};

fn local() -> impl Strategy<Value = TwoLocalNumber> {
    (-10_000i64..10_000, 0i64..200).prop_map(|(a, b)| normalize(BigInt::from(a), BigInt::from(2 * b + 1)).unwrap())
}

fn nonzero() -> impl Strategy<Value = TwoLocalNumber> {
    local().prop_filter("nonzero", |x| x.valuation2().is_some())
}

proptest! {
    #[test]
    fn addition_and_multiplication_commute(a in local(), b in local()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn ring_operations_associate(a in local(), b in local(), c in local()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiplication_distributes(a in local(), b in local(), c in local()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn negation_inverts_addition(a in local(), b in local()) {
        let sum = arith(ArithOp::Add, &a, Some(&b));
        prop_assert_eq!(arith(ArithOp::Add, &sum, Some(&arith(ArithOp::Neg, &b, None))), a);
    }

    #[test]
    fn valuation_is_additive(a in nonzero(), b in nonzero()) {
        let ab = &a * &b;
        prop_assert_eq!(ab.valuation2(), Some(a.valuation2().unwrap() + b.valuation2().unwrap()));
    }

    #[test]
    fn normalize_is_idempotent(a in -5000i64..5000, b in 1i64..400) {
        let b = if b % 2 == 0 { b + 1 } else { b };
        let sign = if a % 3 == 0 { -1 } else { 1 };
        let x = normalize(BigInt::from(a * sign), BigInt::from(b * sign)).unwrap();
        let y = normalize(x.numer().clone(), x.denom().clone()).unwrap();
        prop_assert!(x.denom() > &BigInt::from(0));
        prop_assert_eq!(x, y);
    }

    #[test]
    fn units_are_exactly_the_odd_valuation_zero_elements(a in nonzero()) {
        prop_assert_eq!(a.is_unit(), a.valuation2() == Some(0));
        prop_assert_eq!(a.invert().is_ok(), a.is_unit());
        if let Ok(inv) = a.invert() {
            prop_assert_eq!(&a * &inv, TwoLocalNumber::from_i64(1));
        }
    }
}

#[test]
fn even_denominator_is_rejected() {
    assert_eq!(normalize(BigInt::from(1), BigInt::from(2)), Err(NumericError::EvenDenominator));
    assert_eq!(normalize(BigInt::from(6), BigInt::from(4)), Err(NumericError::EvenDenominator));
    assert_eq!(normalize(BigInt::from(4), BigInt::from(6)).unwrap(), normalize(BigInt::from(2), BigInt::from(3)).unwrap());
}

#[test]
fn two_is_not_invertible() {
    assert!(TwoLocalNumber::from_i64(2).invert().is_err());
    assert_eq!(TwoLocalNumber::from_i64(12).valuation2(), Some(2));
    assert_eq!(TwoLocalNumber::from_i64(0).valuation2(), None);
}
