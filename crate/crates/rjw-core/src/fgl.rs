//! The 2-typical formal group law of E(n) in Araki generators, its
//! m-series, the hatted law and the conjugate orientation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;


use crate::coeffring::{hat, to_hatted, vhat_n_exponent, Elem, GradedElement, Monomial, RingDescriptor};
use crate::numeric::{Rational, TwoLocalNumber};
use crate::report::Report;
use crate::series::{compose, fgl_sum, reversion, BivariateTruncated, SeriesError, TruncatedSeries, Var};

type QElem = GradedElement<Rational>;
pub type QSeries = TruncatedSeries<Rational>;
pub type ZSeries = TruncatedSeries<TwoLocalNumber>;
pub type ZBivariate = BivariateTruncated<TwoLocalNumber>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FglError {
    #[error("coefficient of {what} at {index} is not 2-integral")]
    IntegralityFailure { what: &'static str, index: usize },
    #[error("the two descriptions of the conjugate orientation disagree at degree {0}")]
    CrossCheckFailure(usize),
    #[error("hatted data missing")]
    NotHatted,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The hatted law F-hat together with its 2-series and the conjugate û*.
#[derive(Debug, Clone)]
pub struct HattedLaw {
    pub f: ZBivariate,
    pub two_series: ZSeries,
    pub minus_one_series: ZSeries,
}

#[derive(Debug, Clone)]
pub struct FGLData {
    pub height: u32,
    pub prec: usize,
    pub log: QSeries,
    pub exp: QSeries,
    pub f: ZBivariate,
    pub two_series: ZSeries,
    pub minus_one_series: ZSeries,
    pub hatted: Option<HattedLaw>,
}

pub fn unhatted_ring(n: u32) -> RingDescriptor {
    RingDescriptor::unhatted(n)
}

pub fn hatted_ring(n: u32) -> RingDescriptor {
    RingDescriptor::hatted(n)
}

fn q(v: i64) -> Rational {
    Rational::from_integer(v)
}

/// log u = sum_m l_m u^{2^m} with (2 - 2^{2^m}) l_m = sum_{i<m} l_i v_{m-i}^{2^i}.
pub fn araki_logarithm(n: u32, prec: usize) -> QSeries {
    let ring = unhatted_ring(n).with_rational(true);
    let mut ls: Vec<QElem> = alloc::vec![QElem::one(ring)];
    let mut m = 1usize;
    while (1usize << m) < prec {
        let mut acc = QElem::zero(ring);
        for (i, li) in ls.iter().enumerate() {
            let k = m - i;
            if k as u32 > n {
                continue;
            }
            let vk = QElem::gen(ring, k - 1, 1 << i);
            acc.add_assign_ref(&li.mul(&vk));
        }
        let big = num_bigint::BigInt::from(1u8) << (1usize << m);
        let denom = q(2) - Rational(num_rational::BigRational::from_integer(big));
        ls.push(acc.scale(&denom.recip()));
        m += 1;
    }
    let mut s = QSeries::zero(Var::U, prec, ring);
    for (m, l) in ls.into_iter().enumerate() {
        s.coeffs[1 << m] = l;
    }
    s
}

fn to_integral(s: &QSeries, ring: RingDescriptor, what: &'static str) -> Result<ZSeries, FglError> {
    for (k, c) in s.coeffs.iter().enumerate() {
        if c.terms().any(|(_, x)| TwoLocalNumber::from_rational(x.0.clone()).is_err()) {
            return Err(FglError::IntegralityFailure { what, index: k });
        }
    }
    Ok(ZSeries::from_rational(s, ring).expect("checked"))
}

pub fn build_fgl(n: u32, prec: usize) -> Result<FGLData, FglError> {
    let ring = unhatted_ring(n);
    let log = araki_logarithm(n, prec);
    let exp = reversion(&log)?;
    let qring = log.ring;

    // F = sum_k e_k S^k with S = log x + log y.
    let mut s = BivariateTruncated::zero((Var::U, Var::U), prec, qring);
    for (e, l) in log.coeffs.iter().enumerate() {
        if !l.is_zero() {
            s.add_at(e, 0, l);
            s.add_at(0, e, l);
        }
    }
    let mut fq = BivariateTruncated::zero((Var::U, Var::U), prec, qring);
    let mut sk = s.clone();
    for k in 1..prec {
        if k > 1 {
            sk = sk.mul(&s);
        }
        let ek = &exp.coeffs[k];
        if ek.is_zero() {
            continue;
        }
        for (&(i, j), c) in &sk.coeffs {
            fq.add_at(i, j, &c.mul(ek));
        }
    }
    let mut f = ZBivariate::zero((Var::U, Var::U), prec, ring);
    for (&(i, j), c) in &fq.coeffs {
        let z = c
            .map_scalars(ring, |x| TwoLocalNumber::from_rational(x.0.clone()).ok())
            .ok_or(FglError::IntegralityFailure { what: "F", index: i + j })?;
        f.add_at(i, j, &z);
    }

    let two_log = log.scale_scalar(&q(2));
    let two = to_integral(&compose(&exp, &two_log)?, ring, "[2]")?;
    let minus = to_integral(&compose(&exp, &log.neg())?, ring, "[-1]")?;

    Ok(FGLData { height: n, prec, log, exp, f, two_series: two, minus_one_series: minus, hatted: None })
}

/// Hat every coefficient of a series whose k-th coefficient sits in degree
/// 2(1-k).
pub fn hat_series(s: &ZSeries) -> ZSeries {
    let n = s.ring.height;
    let ring = hatted_ring(n);
    let coeffs = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| hat(c, 2 * (1 - k as i64)).expect("homogeneous coefficient"))
        .collect();
    ZSeries::from_coeffs(Var::UHat, s.prec, ring, coeffs)
}

pub fn hat_transform(f: &FGLData) -> FGLData {
    let n = f.height;
    let ring = hatted_ring(n);
    let mut fh = ZBivariate::zero((Var::UHat, Var::UHat), f.prec, ring);
    for (&(i, j), c) in &f.f.coeffs {
        let d = 2 * (1 - (i + j) as i64);
        fh.add_at(i, j, &hat(c, d).expect("homogeneous coefficient"));
    }
    let mut out = f.clone();
    out.hatted = Some(HattedLaw {
        f: fh,
        two_series: hat_series(&f.two_series),
        minus_one_series: hat_series(&f.minus_one_series),
    });
    out
}

/// û* = [-1]_{F-hat}(û), cross-checked against F-hat(û*, [2](û)) = û.
pub fn u_star_series(f: &FGLData) -> Result<ZSeries, FglError> {
    let h = f.hatted.as_ref().ok_or(FglError::NotHatted)?;
    let ustar = h.minus_one_series.clone();
    let back = h.f.evaluate(&ustar, &h.two_series)?;
    let uh = ZSeries::variable(Var::UHat, back.prec, back.ring);
    if let Some(k) = back.first_difference(&uh) {
        return Err(FglError::CrossCheckFailure(k));
    }
    Ok(ustar)
}

/// v-hat_k in hatted coordinates, with v-hat_0 = 2 and v-hat_n a power of v_n.
pub fn vhat(n: u32, k: u32) -> Elem {
    let ring = hatted_ring(n);
    if k == 0 {
        Elem::from_i64(ring, 2)
    } else if k < n {
        Elem::gen(ring, k as usize - 1, 1)
    } else {
        Elem::vn(ring, vhat_n_exponent(n) as i32)
    }
}

/// Trivariate F(F(x,y),z), keyed by exponents of (x, y, z).
pub fn triple_sum(f: &ZBivariate) -> BTreeMap<(usize, usize, usize), Elem> {
    let p = f.prec;
    let mut out: BTreeMap<(usize, usize, usize), Elem> = BTreeMap::new();
    let mut gpow = ZBivariate::zero(f.vars, p, f.ring);
    gpow.add_at(0, 0, &Elem::one(f.ring));
    for a in 0..p {
        if a > 0 {
            gpow = gpow.mul(f);
        }
        for (&(aa, b), c) in &f.coeffs {
            if aa != a {
                continue;
            }
            for (&(i, j), g) in &gpow.coeffs {
                if i + j + b < p {
                    let e = out.entry((i, j, b)).or_insert_with(|| Elem::zero(f.ring));
                    e.add_assign_ref(&c.mul(g));
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn first_series_mismatch(a: &ZSeries, b: &ZSeries) -> Option<usize> {
    a.first_difference(b)
}

/// The defining identities of the law, checked to its precision.
pub fn verify_construction(f: &FGLData) -> Report {
    let mut r = Report::new("fgl");
    let n = f.height;
    let p = f.prec;
    let ring = f.f.ring;

    // Unit axiom F(x, 0) = x.
    let unit_bad = (0..p)
        .flat_map(|i| [(i, 0), (0, i)])
        .find(|&(i, j)| f.f.get(i, j) != if i + j == 1 { Elem::one(ring) } else { Elem::zero(ring) });
    match unit_bad {
        None => r.pass("unit"),
        Some((i, j)) => r.fail("unit", format!("degree {} at ({},{})", i + j, i, j)),
    }

    let comm_bad = f.f.coeffs.iter().find(|(&(i, j), c)| **c != f.f.get(j, i)).map(|(&k, _)| k);
    match comm_bad {
        None => r.pass("commutativity"),
        Some((i, j)) => r.fail("commutativity", format!("degree {} at ({},{})", i + j, i, j)),
    }

    // With commutativity, associativity is invariance of F(F(x,y),z) under
    // the cyclic shift (x,y,z) -> (y,z,x).
    let t = triple_sum(&f.f);
    let zero = Elem::zero(ring);
    let assoc_bad = t
        .iter()
        .map(|(&k, _)| k)
        .chain(t.keys().map(|&(i, j, k)| (j, k, i)))
        .filter(|&(i, j, k)| t.get(&(i, j, k)).unwrap_or(&zero) != t.get(&(k, i, j)).unwrap_or(&zero))
        .min_by_key(|&(i, j, k)| i + j + k);
    match assoc_bad {
        None => r.pass("associativity"),
        Some((i, j, k)) => r.fail("associativity", format!("degree {} at ({},{},{})", i + j + k, i, j, k)),
    }

    // [2](u) = 2u +_F v_1 u^2 +_F ... +_F v_n u^{2^n}
    let mut terms = alloc::vec![ZSeries::monomial(Var::U, p, ring, 1, Elem::from_i64(ring, 2))];
    for k in 1..=n {
        terms.push(ZSeries::monomial(Var::U, p, ring, 1 << k, Elem::gen(ring, k as usize - 1, 1)));
    }
    match fgl_sum(&f.f, &terms) {
        Ok(s) => match first_series_mismatch(&s, &f.two_series) {
            None => r.pass("two-series"),
            Some(d) => r.fail("two-series", format!("degree {}", d)),
        },
        Err(e) => r.fail("two-series", format!("{}", e)),
    }

    match compose(&f.minus_one_series, &f.minus_one_series) {
        Ok(s) => match first_series_mismatch(&s, &ZSeries::variable(Var::U, p, ring)) {
            None => r.pass("inverse-involution"),
            Some(d) => r.fail("inverse-involution", format!("degree {}", d)),
        },
        Err(e) => r.fail("inverse-involution", format!("{}", e)),
    }

    match f.f.evaluate(&ZSeries::variable(Var::U, p, ring), &f.minus_one_series) {
        Ok(s) => match s.valuation() {
            None => r.pass("inverse"),
            Some(d) => r.fail("inverse", format!("degree {}", d)),
        },
        Err(e) => r.fail("inverse", format!("{}", e)),
    }

    let nonint = f
        .f
        .coeffs
        .iter()
        .map(|(&(i, j), c)| (i + j, c))
        .chain(f.two_series.coeffs.iter().enumerate())
        .chain(f.minus_one_series.coeffs.iter().enumerate())
        .find(|(_, c)| c.min_valuation2().is_some_and(|v| v < 0))
        .map(|(d, _)| d);
    match nonint {
        None => r.pass("integrality"),
        Some(d) => r.fail("integrality", format!("degree {}", d)),
    }

    if let Some(h) = &f.hatted {
        let hr = h.f.ring;
        let mut terms = Vec::new();
        for k in 0..=n {
            terms.push(ZSeries::monomial(Var::UHat, p, hr, 1 << k, vhat(n, k)));
        }
        match fgl_sum(&h.f, &terms) {
            Ok(s) => match first_series_mismatch(&s, &h.two_series) {
                None => r.pass("hatted-two-series"),
                Some(d) => r.fail("hatted-two-series", format!("degree {}", d)),
            },
            Err(e) => r.fail("hatted-two-series", format!("{}", e)),
        }
    }
    r
}

/// Coefficient of x^i y^j of F, as an unhatted element.
pub fn coefficient(f: &FGLData, i: usize, j: usize) -> Elem {
    f.f.get(i, j)
}

/// Monomial in unhatted v's, for tests and fixtures.
pub fn v_monomial(n: u32, exps: &[i32]) -> Elem {
    let mut e = alloc::vec![0; n as usize];
    e[..exps.len()].copy_from_slice(exps);
    Elem::monomial(unhatted_ring(n), Monomial::new(&e), TwoLocalNumber::from_i64(1))
}

/// The unhatted element rewritten in hatted coordinates (no shift).
pub fn in_hatted(e: &Elem) -> Elem {
    to_hatted(e)
}

impl FGLData {
    pub fn ustar(&self) -> Result<ZSeries, FglError> {
        u_star_series(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_terms() {
        for n in 1..=3 {
            let f = build_fgl(n, 6).unwrap();
            let r = unhatted_ring(n);
            let v1 = Elem::gen(r, 0, 1);
            let l1 = v1.map_scalars(f.log.ring, |c| Some(Rational(c.as_rational().clone()))).unwrap();
            assert_eq!(f.log.coeffs[2], l1.scale(&Rational::new(-1, 2)));
            assert_eq!(f.f.get(1, 1), v1);
            assert_eq!(f.f.get(1, 0), Elem::one(r));
            assert_eq!(f.two_series.coeffs[1], Elem::from_i64(r, 2));
            assert_eq!(f.two_series.coeffs[2], v1);
            assert_eq!(f.minus_one_series.coeffs[1], Elem::from_i64(r, -1));
            assert_eq!(f.minus_one_series.coeffs[2], v1);
        }
    }

    #[test]
    fn verifies_small() {
        for n in 1..=2 {
            let f = hat_transform(&build_fgl(n, 12).unwrap());
            let rep = verify_construction(&f);
            assert!(rep.passed(), "{:?}", rep);
            let us = u_star_series(&f).unwrap();
            assert_eq!(us.coeffs[1], Elem::from_i64(hatted_ring(n), -1));
        }
    }

    #[test]
    fn corrupted_law_fails_at_its_degree() {
        let mut f = build_fgl(2, 10).unwrap();
        let r = f.f.ring;
        f.f.add_at(2, 3, &Elem::gen(r, 0, 4));
        let rep = verify_construction(&f);
        let c = rep.get("commutativity").unwrap();
        assert_eq!(c.witness.as_deref(), Some("degree 5 at (2,3)"));
    }
}
