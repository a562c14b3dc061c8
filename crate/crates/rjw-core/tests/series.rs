use proptest::prelude::*;
use rjw_core::coeffring::{Elem, Monomial, RingDescriptor};
use rjw_core::fgl::{build_fgl, ZSeries};
use rjw_core::numeric::TwoLocalNumber;
use rjw_core::series::{compose, fgl_sum, reversion, SeriesError, Var};

const PREC: usize = 8;

fn ring() -> RingDescriptor {
    RingDescriptor::unhatted(2)
}

fn coeff() -> impl Strategy<Value = Elem> {
    prop::collection::vec((0i32..3, 0i32..2, -4i64..5), 0..3).prop_map(|ts| {
        Elem::from_terms(ring(), ts.into_iter().map(|(a, b, c)| (Monomial::new(&[a, b]), TwoLocalNumber::from_i64(c))))
    })
}

fn series() -> impl Strategy<Value = ZSeries> {
    prop::collection::vec(coeff(), PREC).prop_map(|cs| ZSeries::from_coeffs(Var::U, PREC, ring(), cs))
}

fn unit_linear() -> impl Strategy<Value = ZSeries> {
    (series(), prop::sample::select(vec![1i64, -1, 3, -5, 7])).prop_map(|(mut f, u)| {
        f.coeffs[0] = Elem::zero(ring());
        f.coeffs[1] = Elem::from_i64(ring(), u);
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reversion_is_a_compositional_inverse(f in unit_linear()) {
        let g = reversion(&f).unwrap();
        let x = ZSeries::variable(Var::U, PREC, ring());
        prop_assert!(compose(&f, &g).unwrap().agrees_with(&x));
        prop_assert!(compose(&g, &f).unwrap().agrees_with(&x));
    }

    #[test]
    fn series_arithmetic_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn precision_follows_the_minimum(a in series(), k in 1usize..PREC) {
        let b = a.truncate(k);
        prop_assert_eq!(a.add(&b).prec, k);
        prop_assert_eq!(a.mul(&b).prec, k);
    }
}

#[test]
fn formal_sum_is_independent_of_association() {
    let fgl = build_fgl(2, PREC).unwrap();
    let r = fgl.f.ring;
    let x = ZSeries::variable(Var::U, PREC, r);
    let y = x.mul(&x).add(&x.scale(&Elem::from_i64(r, 3)));
    let z = x.pow(3).sub(&x);
    let left = fgl_sum(&fgl.f, &[x.clone(), y.clone(), z.clone()]).unwrap();
    let yz = fgl_sum(&fgl.f, &[y, z]).unwrap();
    let right = fgl_sum(&fgl.f, &[x, yz]).unwrap();
    assert!(left.agrees_with(&right));
}

#[test]
fn reversion_needs_a_unit_linear_term() {
    let x = ZSeries::variable(Var::U, PREC, ring());
    let two_x = x.scale(&Elem::from_i64(ring(), 2));
    assert_eq!(reversion(&two_x).unwrap_err(), SeriesError::NonUnitLinearTerm);
    let shifted = x.add(&ZSeries::constant(Var::U, PREC, Elem::one(ring())));
    assert_eq!(compose(&x, &shifted).unwrap_err(), SeriesError::NonzeroConstantTerm);
}
