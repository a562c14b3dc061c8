use proptest::prelude::*;
use rjw_core::coeffring::{
    hat, involution_c, lambda, reduce_mod_ik, to_hatted, to_unhatted, Elem, IdealIk, Monomial, RingDescriptor,
};
use rjw_core::numeric::TwoLocalNumber;

/// Exponent vectors of total weight `w`, where v_k weighs 2^k - 1.
fn monomials_of_weight(n: usize, w: i32) -> Vec<Vec<i32>> {
    fn go(k: usize, n: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if k == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let wt = (1 << (k + 1)) - 1;
        for e in 0..=left / wt {
            cur.push(e);
            go(k + 1, n, left - e * wt, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, w, &mut Vec::new(), &mut out);
    out
}

fn homogeneous(n: usize, weight: i32, coeffs: &[i64]) -> Elem {
    let ring = RingDescriptor::unhatted(n as u32);
    let monos = monomials_of_weight(n, weight);
    Elem::from_terms(
        ring,
        monos.iter().zip(coeffs.iter().cycle()).map(|(e, &c)| (Monomial::new(e), TwoLocalNumber::from_i64(c))),
    )
}

fn unhatted_elem(n: usize) -> impl Strategy<Value = Elem> {
    prop::collection::vec((prop::collection::vec(0i32..3, n), -6i64..7), 0..5).prop_map(move |terms| {
        Elem::from_terms(
            RingDescriptor::unhatted(n as u32),
            terms.into_iter().map(|(e, c)| (Monomial::new(&e), TwoLocalNumber::from_i64(c))),
        )
    })
}

fn hatted_elem(n: usize) -> impl Strategy<Value = Elem> {
    prop::collection::vec((prop::collection::vec(0i32..3, n - 1), -3i32..4, -6i64..7), 0..5).prop_map(move |terms| {
        Elem::from_terms(
            RingDescriptor::hatted(n as u32),
            terms.into_iter().map(|(mut e, b, c)| {
                e.push(b);
                (Monomial::new(&e), TwoLocalNumber::from_i64(c))
            }),
        )
    })
}

proptest! {
    #[test]
    fn involution_is_a_ring_map_of_order_two((a, b) in (1usize..4).prop_flat_map(|n| (unhatted_elem(n), unhatted_elem(n)))) {
        prop_assert_eq!(involution_c(&a.mul(&b)), involution_c(&a).mul(&involution_c(&b)));
        prop_assert_eq!(involution_c(&a.add(&b)), involution_c(&a).add(&involution_c(&b)));
        prop_assert_eq!(involution_c(&involution_c(&a)), a);
    }

    #[test]
    fn hat_is_multiplicative_and_shifts_degree(
        n in 1usize..4,
        wa in 0i32..6,
        wb in 0i32..6,
        ca in prop::collection::vec(-5i64..6, 1..4),
        cb in prop::collection::vec(-5i64..6, 1..4),
    ) {
        let a = homogeneous(n, wa, &ca);
        let b = homogeneous(n, wb, &cb);
        prop_assume!(!a.is_zero() && !b.is_zero());
        let (da, db) = (-2 * wa as i64, -2 * wb as i64);
        let ha = hat(&a, da).unwrap();
        let hb = hat(&b, db).unwrap();
        prop_assert_eq!(hat(&a.mul(&b), da + db).unwrap(), ha.mul(&hb));
        prop_assert_eq!(ha.degree_of().unwrap(), (da / 2) * (1 - lambda(n as u32)));
    }

    #[test]
    fn hatting_coordinates_round_trips(n in 1usize..4, wa in 0i32..6, ca in prop::collection::vec(-5i64..6, 1..4)) {
        let a = homogeneous(n, wa, &ca);
        let back = to_unhatted(&to_hatted(&a));
        prop_assert_eq!(back.relabel(a.ring()), a);
    }

    #[test]
    fn reduction_mod_ik_is_an_idempotent_ring_map(
        (a, b) in (1usize..4).prop_flat_map(|n| (hatted_elem(n), hatted_elem(n))),
        k in 0u32..5,
    ) {
        let ideal = IdealIk { k };
        let ra = reduce_mod_ik(&a, ideal);
        prop_assert_eq!(reduce_mod_ik(&ra, ideal), ra.clone());
        let rb = reduce_mod_ik(&b, ideal);
        let lhs = reduce_mod_ik(&a.mul(&b), ideal);
        let rhs = reduce_mod_ik(&ra.mul(&rb), ideal);
        if k == 0 {
            prop_assert_eq!(lhs, rhs);
        } else {
            // representatives live in F_2[...]: compare after reducing the sum
            prop_assert!(reduce_mod_ik(&lhs.sub(&rhs), ideal).is_zero());
            prop_assert!(reduce_mod_ik(&a.add(&b).sub(&ra).sub(&rb), ideal).is_zero());
        }
    }
}

#[test]
fn degrees_of_generators() {
    let ring = RingDescriptor::unhatted(3);
    assert_eq!(ring.generator_degree(0), -2);
    assert_eq!(ring.generator_degree(2), -14);
    for n in 1..7u32 {
        let one_minus = 1 - lambda(n);
        assert_eq!(one_minus, -(1i64 << (n + 2)) * ((1i64 << (n - 1)) - 1));
    }
}

#[test]
fn i1_is_generated_by_two() {
    let ring = RingDescriptor::hatted(2);
    let six = Elem::from_i64(ring, 6);
    let three = Elem::from_i64(ring, 3);
    assert!(reduce_mod_ik(&six, IdealIk { k: 1 }).is_zero());
    assert_eq!(reduce_mod_ik(&three, IdealIk { k: 1 }), Elem::one(ring));
    assert_eq!(reduce_mod_ik(&six, IdealIk { k: 0 }), six);
}
