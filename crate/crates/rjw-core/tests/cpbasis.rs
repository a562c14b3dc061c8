use std::sync::OnceLock;

use proptest::prelude::*;
use rjw_core::coeffring::{Elem, Monomial};
use rjw_core::cpbasis::{
    congruence_suite, even_odd_split, in_vhat_subring, two_local, xi_identity_holds, xi_series, CpContext,
    CpError, KernelDecomposition, WSeries,
};
use rjw_core::fgl::{build_fgl, verify_construction, ZSeries};
use rjw_core::series::Var;

const U_PREC: usize = 12;

fn ctx2() -> &'static CpContext {
    static CTX: OnceLock<CpContext> = OnceLock::new();
    CTX.get_or_init(|| CpContext::new(2, U_PREC).unwrap())
}

/// A w-series with coefficients in Z_(2)[vh_1, v_2^{±2}].
fn s_series(prec: usize) -> impl Strategy<Value = WSeries> {
    prop::collection::vec(prop::option::of((0i32..2, -1i32..2, -3i64..4)), prec).prop_map(move |cs| {
        let ring = ctx2().ring();
        let coeffs = cs
            .into_iter()
            .map(|t| match t {
                Some((a, b, c)) => Elem::monomial(ring, Monomial::new(&[a, 2 * b]), two_local(c)),
                None => Elem::zero(ring),
            })
            .collect();
        WSeries::new(ZSeries::from_coeffs(Var::W, prec, ring, coeffs)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_basis_round_trips(even in s_series(U_PREC / 2), odd in s_series(U_PREC / 2)) {
        let ctx = ctx2();
        let k = KernelDecomposition { even, odd };
        let f = ctx.recompose(&k);
        let back = ctx.decompose_cycle(&f).unwrap();
        prop_assert!(ctx.recompose(&back).agrees_with(&f));
        prop_assert!(back.even.series().agrees_with(k.even.series()));
        prop_assert!(back.odd.series().agrees_with(k.odd.series()));
    }

    #[test]
    fn splitting_is_exact(even in s_series(U_PREC / 2), odd in s_series(U_PREC / 2)) {
        let ctx = ctx2();
        let f = ctx.recompose(&KernelDecomposition { even, odd });
        let (e, o) = even_odd_split(&f);
        prop_assert_eq!(e.add(&o), f);
    }
}

#[test]
fn construction_verifies_at_low_heights() {
    for n in 1..=2 {
        let f = build_fgl(n, 12).unwrap();
        let rep = verify_construction(&f);
        assert!(rep.passed(), "n={}: {:?}", n, rep.first_failure());
    }
}

#[test]
fn conjugation_is_an_involution() {
    let ctx = ctx2();
    let u = ZSeries::variable(Var::UHat, U_PREC, ctx.ring());
    assert!(ctx.conjugate(&ctx.conjugate(&u)).agrees_with(&u));
    for c in &ctx.ustar.coeffs {
        assert!(c.terms().all(|(m, _)| m.vn_exp() % 2 == 0));
    }
}

#[test]
fn norm_restriction_examples() {
    let ctx = ctx2();
    let r = ctx.ring();
    let u = ZSeries::variable(Var::UHat, U_PREC, r);
    assert_eq!(ctx.norm_restriction(&u), ctx.u_plus);
    let vn = Elem::vn(r, 1);
    assert!(ctx.norm_restriction(&u.scale(&vn)).agrees_with(&ctx.u_minus.scale(&vn)));
    let w2 = ctx.w_pows[2].clone();
    assert!(ctx.norm_restriction(&w2).agrees_with(&w2.scale(&Elem::from_i64(r, 2))));
}

#[test]
fn non_cycles_are_rejected() {
    let ctx = ctx2();
    let r = ctx.ring();
    let u = ZSeries::variable(Var::UHat, U_PREC, r);
    assert_eq!(ctx.rewrite_even_in_w(&u), Err(CpError::OddLeadingDegree(1)));
    let vn_u = u.scale(&Elem::vn(r, 1));
    assert_eq!(ctx.rewrite_odd_in_w(&vn_u), Err(CpError::NotDivisibleBy2(1)));
    // 2 v_n u starts like v_n(u - u*) but is not a cycle
    let two_vn_u = vn_u.scale(&Elem::from_i64(r, 2));
    assert!(ctx.rewrite_odd_in_w(&two_vn_u).is_err());
    let basis = ctx.u_minus.scale(&Elem::vn(r, 1));
    let h = ctx.rewrite_odd_in_w(&basis).unwrap();
    assert_eq!(h.coeff(0), &Elem::one(r));
    assert!((1..h.prec()).all(|l| h.coeff(l).is_zero()));
}

#[test]
fn xi_identity_and_shape() {
    for n in 1..=2u32 {
        let ctx = CpContext::new(n, 16).unwrap();
        let xi = ctx.xi().unwrap();
        assert_eq!(xi_identity_holds(&ctx, &xi), None);
        assert!(xi.coeff(0).is_zero());
        assert!(in_vhat_subring(&xi).is_ok());
        let rep = congruence_suite(&ctx).unwrap();
        assert!(rep.passed(), "n={}: {:?}", n, rep.first_failure());
    }
}

#[test]
fn xi_at_height_one_is_minus_w_to_first_order() {
    let xi = xi_series(1, 8).unwrap();
    let r = xi.series().ring;
    assert_eq!(xi.coeff(1), &Elem::from_i64(r, -1));
}
