//! Truncated power series over graded coefficients, in one or two variables.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::numeric::Rational;

use crate::coeffring::{lambda, GradedElement, RingDescriptor};
use crate::numeric::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series variables differ")]
    VariableMismatch,
    #[error("coefficient rings differ")]
    DescriptorMismatch,
    #[error("substituted series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("linear coefficient is not a unit")]
    NonUnitLinearTerm,
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("result does not live over the requested scalars")]
    ScalarConversion,
    #[error("empty formal sum")]
    EmptySum,
}

/// The tagged series variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    U,
    UHat,
    W,
    P1,
}

impl Var {
    pub fn degree(self, n: u32) -> i64 {
        match self {
            Var::U => 2,
            Var::UHat => 1 - lambda(n),
            Var::W | Var::P1 => 2 * (1 - lambda(n)),
        }
    }
    pub fn name(self) -> &'static str {
        match self {
            Var::U => "u",
            Var::UHat => "uh",
            Var::W => "w",
            Var::P1 => "p1",
        }
    }
}

/// sum_{e < prec} coeffs[e] var^e + O(var^prec)
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries<S: Scalar> {
    pub var: Var,
    pub prec: usize,
    pub ring: RingDescriptor,
    pub coeffs: Vec<GradedElement<S>>,
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn zero(var: Var, prec: usize, ring: RingDescriptor) -> Self {
        TruncatedSeries { var, prec, ring, coeffs: (0..prec).map(|_| GradedElement::zero(ring)).collect() }
    }

    pub fn from_coeffs(var: Var, prec: usize, ring: RingDescriptor, coeffs: Vec<GradedElement<S>>) -> Self {
        let mut s = Self::zero(var, prec, ring);
        for (k, c) in coeffs.into_iter().enumerate().take(prec) {
            s.coeffs[k] = c;
        }
        s
    }

    /// The series `var` itself.
    pub fn variable(var: Var, prec: usize, ring: RingDescriptor) -> Self {
        Self::monomial(var, prec, ring, 1, GradedElement::one(ring))
    }

    pub fn monomial(var: Var, prec: usize, ring: RingDescriptor, e: usize, c: GradedElement<S>) -> Self {
        let mut s = Self::zero(var, prec, ring);
        if e < prec {
            s.coeffs[e] = c;
        }
        s
    }

    pub fn constant(var: Var, prec: usize, c: GradedElement<S>) -> Self {
        let ring = c.ring();
        Self::monomial(var, prec, ring, 0, c)
    }

    pub fn coeff(&self, e: usize) -> &GradedElement<S> {
        &self.coeffs[e]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let p = prec.min(self.prec);
        TruncatedSeries { var: self.var, prec: p, ring: self.ring, coeffs: self.coeffs[..p].to_vec() }
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.var != other.var {
            return Err(SeriesError::VariableMismatch);
        }
        if self.ring != other.ring {
            return Err(SeriesError::DescriptorMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let p = self.prec.min(other.prec);
        let coeffs = (0..p).map(|k| self.coeffs[k].add(&other.coeffs[k])).collect();
        Ok(TruncatedSeries { var: self.var, prec: p, ring: self.ring, coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("series add")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("series mul")
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let p = self.prec.min(other.prec);
        let lo_a = self.valuation().unwrap_or(p);
        let lo_b = other.valuation().unwrap_or(p);
        let mut out = Self::zero(self.var, p, self.ring);
        for k in (lo_a + lo_b)..p {
            let pairs = (lo_a..=k - lo_b)
                .map(|i| (&self.coeffs[i], &other.coeffs[k - i]))
                .filter(|(a, b)| !a.is_zero() && !b.is_zero());
            out.coeffs[k] = GradedElement::sum_of_products(self.ring, pairs);
        }
        out
    }

    pub fn scale(&self, c: &GradedElement<S>) -> Self {
        self.map_coeffs(|a| c.mul(a))
    }

    pub fn scale_scalar(&self, c: &S) -> Self {
        self.map_coeffs(|a| a.scale(c))
    }

    /// Multiply by var^k, keeping the precision budget shifted.
    pub fn shift(&self, k: usize) -> Self {
        let mut out = Self::zero(self.var, self.prec + k, self.ring);
        for (e, c) in self.coeffs.iter().enumerate() {
            out.coeffs[e + k] = c.clone();
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&GradedElement<S>) -> GradedElement<S>) -> Self {
        TruncatedSeries { var: self.var, prec: self.prec, ring: self.ring, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::constant(self.var, self.prec, GradedElement::one(self.ring));
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Multiplicative inverse; the constant term must be invertible.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0inv = self.coeffs.first().and_then(|c| c.try_inverse()).ok_or(SeriesError::NotInvertible)?;
        let p = self.prec;
        let mut out = Self::zero(self.var, p, self.ring);
        out.coeffs[0] = c0inv.clone();
        for k in 1..p {
            let mut acc = GradedElement::zero(self.ring);
            for j in 1..=k {
                if self.coeffs[j].is_zero() || out.coeffs[k - j].is_zero() {
                    continue;
                }
                acc.add_assign_ref(&self.coeffs[j].mul(&out.coeffs[k - j]));
            }
            out.coeffs[k] = acc.mul(&c0inv).neg();
        }
        Ok(out)
    }

    /// Equality on the common precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let p = self.prec.min(other.prec);
        (0..p).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    pub fn map_scalars<T: Scalar>(&self, ring: RingDescriptor, f: impl Fn(&S) -> Option<T>) -> Option<TruncatedSeries<T>> {
        let coeffs = self.coeffs.iter().map(|c| c.map_scalars(ring, &f)).collect::<Option<Vec<_>>>()?;
        Some(TruncatedSeries { var: self.var, prec: self.prec, ring, coeffs })
    }

    pub fn to_rational(&self) -> TruncatedSeries<Rational> {
        let ring = self.ring.with_rational(true);
        self.map_scalars(ring, |c| Some(Rational(c.to_rational()))).unwrap()
    }

    pub fn from_rational(s: &TruncatedSeries<Rational>, ring: RingDescriptor) -> Option<Self> {
        s.map_scalars(ring, |c| S::from_rational(c.0.clone()))
    }
}

impl<S: Scalar> fmt::Display for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if any {
                write!(f, " + ")?;
            }
            any = true;
            match e {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({}){}", c, self.var.name())?,
                _ => write!(f, "({}){}^{}", c, self.var.name(), e)?,
            }
        }
        if any {
            write!(f, " + ")?;
        }
        write!(f, "O({}^{})", self.var.name(), self.prec)
    }
}

impl<S: Scalar> fmt::Debug for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Scale,
}

pub enum Operand<'a, S: Scalar> {
    Series(&'a TruncatedSeries<S>),
    Element(&'a GradedElement<S>),
}

pub fn series_arith<S: Scalar>(
    op: SeriesOp,
    s: &TruncatedSeries<S>,
    t: Operand<'_, S>,
) -> Result<TruncatedSeries<S>, SeriesError> {
    match (op, t) {
        (SeriesOp::Add, Operand::Series(t)) => s.try_add(t),
        (SeriesOp::Mul, Operand::Series(t)) => s.try_mul(t),
        (SeriesOp::Scale, Operand::Element(c)) => {
            if c.ring() != s.ring {
                return Err(SeriesError::DescriptorMismatch);
            }
            Ok(s.scale(c))
        }
        (SeriesOp::Add, Operand::Element(c)) => s.try_add(&TruncatedSeries::constant(s.var, s.prec, c.clone())),
        (SeriesOp::Mul, Operand::Element(c)) => Ok(s.scale(c)),
        (SeriesOp::Scale, Operand::Series(_)) => Err(SeriesError::VariableMismatch),
    }
}

/// f(g) by Horner's rule; the result is in g's variable.
pub fn compose<S: Scalar>(f: &TruncatedSeries<S>, g: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>, SeriesError> {
    if !g.coeffs.first().map_or(true, |c| c.is_zero()) {
        return Err(SeriesError::NonzeroConstantTerm);
    }
    if f.ring != g.ring {
        return Err(SeriesError::DescriptorMismatch);
    }
    let v = g.valuation().unwrap_or(g.prec);
    let p = g.prec.min(v.saturating_mul(f.prec));
    let g = g.truncate(p);
    let mut r = TruncatedSeries::zero(g.var, p, g.ring);
    for k in (0..f.prec).rev() {
        if k * v >= p && f.coeffs[k].is_zero() {
            continue;
        }
        if !r.is_zero() {
            r = r.mul_unchecked(&g);
        }
        r.coeffs[0].add_assign_ref(&f.coeffs[k]);
    }
    Ok(r)
}

/// Compositional inverse by Lagrange inversion, carried out over Q.
pub fn reversion<S: Scalar>(f: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>, SeriesError> {
    if !f.coeffs[0].is_zero() {
        return Err(SeriesError::NonzeroConstantTerm);
    }
    let c = f.coeffs.get(1).ok_or(SeriesError::NonUnitLinearTerm)?;
    if c.try_inverse().is_none() {
        return Err(SeriesError::NonUnitLinearTerm);
    }
    let p = f.prec;
    let q = f.to_rational();
    // f = u * phi, h = 1/phi
    let phi = TruncatedSeries::from_coeffs(q.var, p - 1, q.ring, q.coeffs[1..].to_vec());
    let h = phi.inverse().map_err(|_| SeriesError::NonUnitLinearTerm)?;
    let mut g = TruncatedSeries::zero(q.var, p, q.ring);
    let mut hk = TruncatedSeries::constant(q.var, p - 1, GradedElement::one(q.ring));
    for k in 1..p {
        hk = hk.mul(&h);
        let inv_k = Rational::new(1, k as i64);
        g.coeffs[k] = hk.coeffs[k - 1].scale(&inv_k);
    }
    TruncatedSeries::from_rational(&g, f.ring).ok_or(SeriesError::ScalarConversion)
}

/// Sparse bivariate series truncated by total degree.
#[derive(Clone, PartialEq, Eq)]
pub struct BivariateTruncated<S: Scalar> {
    pub vars: (Var, Var),
    pub prec: usize,
    pub ring: RingDescriptor,
    pub coeffs: BTreeMap<(usize, usize), GradedElement<S>>,
}

impl<S: Scalar> BivariateTruncated<S> {
    pub fn zero(vars: (Var, Var), prec: usize, ring: RingDescriptor) -> Self {
        BivariateTruncated { vars, prec, ring, coeffs: BTreeMap::new() }
    }

    pub fn get(&self, i: usize, j: usize) -> GradedElement<S> {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(|| GradedElement::zero(self.ring))
    }

    pub fn add_at(&mut self, i: usize, j: usize, c: &GradedElement<S>) {
        if i + j >= self.prec || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry((i, j)).or_insert_with(|| GradedElement::zero(c.ring()));
        e.add_assign_ref(c);
        if e.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prec.min(other.prec);
        let mut out = Self::zero(self.vars, p, self.ring);
        for (&(i, j), a) in &self.coeffs {
            for (&(k, l), b) in &other.coeffs {
                if i + j + k + l < p {
                    out.add_at(i + k, j + l, &a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prec.min(other.prec);
        let mut out = Self::zero(self.vars, p, self.ring);
        for (&(i, j), a) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_at(i, j, a);
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(&(i, j), c)| *c == self.get(j, i))
    }

    pub fn map_coeffs(&self, f: impl Fn(usize, usize, &GradedElement<S>) -> GradedElement<S>) -> Self {
        let mut out = Self::zero(self.vars, self.prec, self.ring);
        for (&(i, j), c) in &self.coeffs {
            let d = f(i, j, c);
            out.ring = d.ring();
            out.add_at(i, j, &d);
        }
        out
    }

    /// Substitute univariate series with zero constant term for both variables.
    pub fn evaluate(&self, a: &TruncatedSeries<S>, b: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>, SeriesError> {
        a.check(b)?;
        for s in [a, b] {
            if !s.coeffs.first().map_or(true, |c| c.is_zero()) {
                return Err(SeriesError::NonzeroConstantTerm);
            }
        }
        let p = a.prec.min(b.prec).min(self.prec);
        let a = a.truncate(p);
        let b = b.truncate(p);
        let mut bpow = Vec::with_capacity(p);
        bpow.push(TruncatedSeries::constant(b.var, p, GradedElement::one(b.ring)));
        for j in 1..p {
            let next = bpow[j - 1].mul_unchecked(&b);
            bpow.push(next);
        }
        let mut rows: Vec<TruncatedSeries<S>> = (0..p).map(|_| TruncatedSeries::zero(a.var, p, a.ring)).collect();
        for (&(i, j), c) in &self.coeffs {
            if i + j >= p {
                continue;
            }
            let row = &mut rows[i];
            for e in j..(p - i) {
                let bc = &bpow[j].coeffs[e];
                if !bc.is_zero() {
                    row.coeffs[e].add_assign_ref(&c.mul(bc));
                }
            }
        }
        let mut r = TruncatedSeries::zero(a.var, p, a.ring);
        for i in (0..p).rev() {
            r = r.mul_unchecked(&a).add(&rows[i]);
        }
        Ok(r)
    }
}

impl<S: Scalar> fmt::Debug for BivariateTruncated<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((i, j), c) in &self.coeffs {
            write!(f, "[{},{}]: {}; ", i, j, c)?;
        }
        write!(f, "O({})", self.prec)
    }
}

/// Left fold of the formal sum x +_F y = F(x, y).
pub fn fgl_sum<S: Scalar>(f: &BivariateTruncated<S>, terms: &[TruncatedSeries<S>]) -> Result<TruncatedSeries<S>, SeriesError> {
    let (first, rest) = terms.split_first().ok_or(SeriesError::EmptySum)?;
    if !first.coeffs.first().map_or(true, |c| c.is_zero()) {
        return Err(SeriesError::NonzeroConstantTerm);
    }
    let mut acc = first.clone();
    for t in rest {
        acc = f.evaluate(&acc, t)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Elem;
    use crate::numeric::TwoLocalNumber as Q;

    fn ring() -> RingDescriptor {
        RingDescriptor::hatted(2)
    }

    fn poly(cs: &[i64], prec: usize) -> TruncatedSeries<Q> {
        let r = ring();
        TruncatedSeries::from_coeffs(Var::UHat, prec, r, cs.iter().map(|&c| Elem::from_i64(r, c)).collect())
    }

    #[test]
    fn arithmetic() {
        let u = poly(&[0, 1], 6);
        assert_eq!(u.mul(&u), poly(&[0, 0, 1], 6));
        assert!(u.add(&u.neg()).is_zero());
        let vn = Elem::vn(ring(), 1);
        let s = poly(&[0, 1, 1], 6).scale(&vn);
        assert_eq!(s.coeff(1), &vn);
        assert_eq!(s.coeff(2), &vn);
        let w = poly(&[0, 1], 4).with_var(Var::W);
        assert_eq!(u.try_add(&w), Err(SeriesError::VariableMismatch));
        assert_eq!(poly(&[1, 1], 4).try_add(&poly(&[1], 3)).unwrap().prec, 3);
    }

    #[test]
    fn composition() {
        let f = poly(&[0, 1, 1], 3);
        assert_eq!(compose(&f, &poly(&[0, 1], 3)).unwrap(), f);
        assert_eq!(compose(&poly(&[0, 0, 1], 5), &poly(&[0, -1], 5)).unwrap(), poly(&[0, 0, 1], 5));
        assert_eq!(compose(&f, &f).unwrap(), poly(&[0, 1, 2], 3));
        assert_eq!(compose(&f, &poly(&[1, 1], 3)), Err(SeriesError::NonzeroConstantTerm));
    }

    #[test]
    fn reversion_examples() {
        let u = poly(&[0, 1], 8);
        assert_eq!(reversion(&u).unwrap(), u);
        assert_eq!(reversion(&u.neg()).unwrap(), u.neg());
        let f = poly(&[0, 1, 3], 3);
        assert_eq!(reversion(&f).unwrap(), poly(&[0, 1, -3], 3));
        assert_eq!(reversion(&poly(&[0, 2, 1], 4)), Err(SeriesError::NonUnitLinearTerm));
        let g = poly(&[0, 1, 1, -2, 5], 9);
        let r = reversion(&g).unwrap();
        assert_eq!(compose(&g, &r).unwrap(), poly(&[0, 1], 9));
    }
}
