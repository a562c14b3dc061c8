//! Graded coefficient rings: Z_(2)[v_1..v_n] and the hatted E(n)^* with the
//! involution c, the hat shift, and the ideals I_k.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write;

use crate::numeric::{Scalar, TwoLocalNumber};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("descriptor mismatch")]
    DescriptorMismatch,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("zero element has no degree")]
    ZeroElement,
    #[error("degree is odd")]
    OddDegree,
    #[error("degree does not match the declared one")]
    DegreeMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coords {
    Unhatted,
    Hatted,
}

/// Which graded ring an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingDescriptor {
    pub height: u32,
    pub coords: Coords,
    pub rational: bool,
    pub vn_inverted: bool,
}

impl RingDescriptor {
    pub fn unhatted(height: u32) -> Self {
        RingDescriptor { height, coords: Coords::Unhatted, rational: false, vn_inverted: false }
    }
    pub fn hatted(height: u32) -> Self {
        RingDescriptor { height, coords: Coords::Hatted, rational: false, vn_inverted: true }
    }
    pub fn with_rational(mut self, rational: bool) -> Self {
        self.rational = rational;
        self
    }
    pub fn with_inverted(mut self, inv: bool) -> Self {
        self.vn_inverted = inv;
        self
    }
    pub fn n(&self) -> usize {
        self.height as usize
    }
    /// Degree of the generator in slot `slot` (0-based; slot n-1 is v_n).
    pub fn generator_degree(&self, slot: usize) -> i64 {
        let n = self.height;
        let k = slot as u32 + 1;
        match self.coords {
            Coords::Unhatted => vk_degree(k),
            Coords::Hatted if k == n => vk_degree(n),
            Coords::Hatted => vhat_degree(n, k),
        }
    }
    pub fn generator_name(&self, slot: usize) -> String {
        let k = slot + 1;
        if self.coords == Coords::Hatted && k < self.n() {
            alloc::format!("vh{}", k)
        } else {
            alloc::format!("v{}", k)
        }
    }
}

pub fn lambda(n: u32) -> i64 {
    let t = (1i64 << n) - 1;
    2 * t * t - 1
}

pub fn vk_degree(k: u32) -> i64 {
    -2 * ((1i64 << k) - 1)
}

pub fn vhat_degree(n: u32, k: u32) -> i64 {
    (lambda(n) - 1) * ((1i64 << k) - 1)
}

/// Exponent e with v-hat_n = v_n^e, namely 1 - (2^n - 1)^2.
pub fn vhat_n_exponent(n: u32) -> i64 {
    let t = (1i64 << n) - 1;
    1 - t * t
}

pub const MAX_HEIGHT: usize = 8;

/// Exponent vector; slot n-1 is always v_n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: [i32; MAX_HEIGHT],
    len: u8,
}

impl core::ops::Deref for Monomial {
    type Target = [i32];
    fn deref(&self) -> &[i32] {
        &self.exps[..self.len as usize]
    }
}

impl core::ops::DerefMut for Monomial {
    fn deref_mut(&mut self) -> &mut [i32] {
        &mut self.exps[..self.len as usize]
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&**self, f)
    }
}

impl Monomial {
    pub fn new(exps: &[i32]) -> Self {
        assert!(exps.len() <= MAX_HEIGHT, "height above {}", MAX_HEIGHT);
        let mut e = [0; MAX_HEIGHT];
        e[..exps.len()].copy_from_slice(exps);
        Monomial { exps: e, len: exps.len() as u8 }
    }
    pub fn one(n: usize) -> Self {
        Self::new(&vec![0; n])
    }
    pub fn generator(n: usize, slot: usize, power: i32) -> Self {
        let mut m = Self::one(n);
        m[slot] = power;
        m
    }
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut r = *self;
        for i in 0..self.len as usize {
            r.exps[i] += other.exps[i];
        }
        r
    }
    pub fn inv(&self) -> Monomial {
        let mut r = *self;
        for i in 0..self.len as usize {
            r.exps[i] = -r.exps[i];
        }
        r
    }
    pub fn degree(&self, ring: &RingDescriptor) -> i64 {
        self.iter().enumerate().map(|(i, &e)| e as i64 * ring.generator_degree(i)).sum()
    }
    pub fn vn_exp(&self) -> i32 {
        *self.last().unwrap()
    }
    pub fn is_one(&self) -> bool {
        self.iter().all(|&e| e == 0)
    }
}

/// A Laurent polynomial in the generators with scalar coefficients.
/// Terms are kept sorted by monomial with no zero coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GradedElement<S: Scalar> {
    ring: RingDescriptor,
    terms: Vec<(Monomial, S)>,
}

pub type Elem = GradedElement<TwoLocalNumber>;

fn combine<S: Scalar>(mut v: Vec<(Monomial, S)>) -> Vec<(Monomial, S)> {
    v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(Monomial, S)> = Vec::with_capacity(v.len());
    for (m, c) in v {
        if let Some(last) = out.last_mut() {
            if last.0 == m {
                last.1 = core::mem::replace(&mut last.1, S::zero()) + c;
                continue;
            }
        }
        out.push((m, c));
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

impl<S: Scalar> GradedElement<S> {
    pub fn zero(ring: RingDescriptor) -> Self {
        GradedElement { ring, terms: Vec::new() }
    }
    pub fn one(ring: RingDescriptor) -> Self {
        Self::scalar(ring, S::one())
    }
    pub fn scalar(ring: RingDescriptor, c: S) -> Self {
        Self::monomial(ring, Monomial::one(ring.n()), c)
    }
    pub fn from_i64(ring: RingDescriptor, c: i64) -> Self {
        Self::scalar(ring, S::from_i64(c))
    }
    pub fn monomial(ring: RingDescriptor, m: Monomial, c: S) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        GradedElement { ring, terms }
    }
    /// The generator in `slot` raised to `power`.
    pub fn gen(ring: RingDescriptor, slot: usize, power: i32) -> Self {
        Self::monomial(ring, Monomial::generator(ring.n(), slot, power), S::one())
    }
    /// v_n^power, valid in both coordinate systems.
    pub fn vn(ring: RingDescriptor, power: i32) -> Self {
        Self::gen(ring, ring.n() - 1, power)
    }
    pub fn from_terms(ring: RingDescriptor, it: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        GradedElement { ring, terms: combine(it.into_iter().collect()) }
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter().map(|(m, c)| (m, c))
    }
    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, S)> {
        self.terms.into_iter()
    }
    pub fn coeff(&self, m: &Monomial) -> S {
        match self.terms.binary_search_by(|t| t.0.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => S::zero(),
        }
    }
    pub fn relabel(mut self, ring: RingDescriptor) -> Self {
        self.ring = ring;
        self
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by(|t| t.0.cmp(&m)) {
            Ok(i) => {
                let s = core::mem::replace(&mut self.terms[i].1, S::zero()) + c;
                if s.is_zero() {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = s;
                }
            }
            Err(i) => self.terms.insert(i, (m, c)),
        }
    }

    fn merge_with(&mut self, other: impl Iterator<Item = (Monomial, S)>) {
        let mine = core::mem::take(&mut self.terms);
        let mut out = Vec::with_capacity(mine.len());
        let mut a = mine.into_iter().peekable();
        let mut b = other.peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => core::cmp::Ordering::Less,
                (None, Some(_)) => core::cmp::Ordering::Greater,
                (Some(x), Some(y)) => x.0.cmp(&y.0),
            };
            match ord {
                core::cmp::Ordering::Less => out.push(a.next().unwrap()),
                core::cmp::Ordering::Greater => out.push(b.next().unwrap()),
                core::cmp::Ordering::Equal => {
                    let (m, x) = a.next().unwrap();
                    let (_, y) = b.next().unwrap();
                    let s = x + y;
                    if !s.is_zero() {
                        out.push((m, s));
                    }
                }
            }
        }
        self.terms = out;
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            self.terms = other.terms.clone();
            return;
        }
        self.merge_with(other.terms.iter().cloned());
    }

    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        if c.is_zero() {
            return;
        }
        self.merge_with(other.terms.iter().map(|(m, d)| (*m, d.clone() * c.clone())));
    }

    /// self += a * b
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = a.mul(b);
        self.add_assign_ref(&p);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign_ref(other);
        r
    }
    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.merge_with(other.terms.iter().map(|(m, c)| (*m, -c.clone())));
        r
    }
    pub fn neg(&self) -> Self {
        GradedElement { ring: self.ring, terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.ring);
        }
        GradedElement {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, d)| (*m, d.clone() * c.clone())).collect(),
        }
    }
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        GradedElement { ring: self.ring, terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, CoeffError> {
        if self.ring != other.ring {
            return Err(CoeffError::DescriptorMismatch);
        }
        Ok(self.mul(other))
    }

    /// Product; descriptors are assumed equal (checked in debug builds).
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ring, other.ring);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return GradedElement {
                ring: self.ring,
                terms: other.terms.iter().map(|(k, d)| (k.mul(m), c.clone() * d.clone())).collect(),
            };
        }
        if other.terms.len() == 1 {
            return other.mul(self);
        }
        let mut v = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                v.push((m1.mul(m2), c1.clone() * c2.clone()));
            }
        }
        GradedElement { ring: self.ring, terms: combine(v) }
    }

    /// sum of a_i * b_i, combined in one pass.
    pub fn sum_of_products<'a>(ring: RingDescriptor, pairs: impl Iterator<Item = (&'a Self, &'a Self)>) -> Self
    where
        S: 'a,
    {
        let mut v = Vec::new();
        for (a, b) in pairs {
            for (m1, c1) in &a.terms {
                for (m2, c2) in &b.terms {
                    v.push((m1.mul(m2), c1.clone() * c2.clone()));
                }
            }
        }
        GradedElement { ring, terms: combine(v) }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.ring);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn degree_of(&self) -> Result<i64, CoeffError> {
        let mut it = self.terms.iter().map(|t| &t.0);
        let first = it.next().ok_or(CoeffError::ZeroElement)?;
        let d = first.degree(&self.ring);
        if it.all(|m| m.degree(&self.ring) == d) {
            Ok(d)
        } else {
            Err(CoeffError::NotHomogeneous)
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree_of().is_ok()
    }

    /// The involution c: v_i -> -v_i unhatted; only v_n -> -v_n hatted.
    pub fn involution_c(&self) -> Self {
        let n = self.ring.n();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let parity = match self.ring.coords {
                    Coords::Unhatted => m.iter().sum::<i32>(),
                    Coords::Hatted => m[n - 1],
                };
                let c = if parity.rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
                (*m, c)
            })
            .collect();
        GradedElement { ring: self.ring, terms }
    }

    /// Inverse when the element is a unit scalar times an invertible monomial.
    pub fn try_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = &self.terms[0];
        let n = self.ring.n();
        let ok = m.iter().enumerate().all(|(i, &e)| e == 0 || (i == n - 1 && self.ring.vn_inverted));
        if !ok {
            return None;
        }
        Some(Self::monomial(self.ring, m.inv(), c.try_inverse()?))
    }

    pub fn map_scalars<T: Scalar>(&self, ring: RingDescriptor, f: impl Fn(&S) -> Option<T>) -> Option<GradedElement<T>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let d = f(c)?;
            if !d.is_zero() {
                terms.push((*m, d));
            }
        }
        Some(GradedElement { ring, terms })
    }

    pub fn map_monomials(&self, ring: RingDescriptor, f: impl Fn(&Monomial) -> Monomial) -> Self {
        GradedElement::from_terms(ring, self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    pub fn filter_terms(&self, keep: impl Fn(&Monomial, &S) -> bool) -> Self {
        GradedElement { ring: self.ring, terms: self.terms.iter().filter(|(m, c)| keep(m, c)).cloned().collect() }
    }

    /// Minimum 2-adic valuation over coefficients.
    pub fn min_valuation2(&self) -> Option<i64> {
        self.terms.iter().filter_map(|(_, c)| c.valuation2()).min()
    }

    /// Divide every coefficient by 2^k when that stays in the scalar ring.
    pub fn div_pow2(&self, k: u32) -> Option<Self> {
        let two_k = num_rational::BigRational::from_integer(num_bigint::BigInt::from(1u8) << k as usize);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((*m, S::from_rational(c.to_rational() / two_k.clone())?));
        }
        Some(GradedElement { ring: self.ring, terms })
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &S)> {
        self.terms.first().map(|(m, c)| (m, c))
    }
}

impl<S: Scalar> fmt::Display for GradedElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mut s = String::new();
            let mut mono = String::new();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                let _ = write!(mono, "{}", self.ring.generator_name(i));
                if e != 1 {
                    let _ = write!(mono, "^{}", e);
                }
            }
            let neg = c.clone() < S::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if mono.is_empty() {
                let _ = write!(s, "{}", abs);
            } else if abs == S::one() {
                s.push_str(&mono);
            } else {
                let _ = write!(s, "{}*{}", abs, mono);
            }
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            write!(f, "{}", s)?;
            first = false;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for GradedElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn degree_of<S: Scalar>(a: &GradedElement<S>) -> Result<i64, CoeffError> {
    a.degree_of()
}

pub fn multiply<S: Scalar>(a: &GradedElement<S>, b: &GradedElement<S>) -> Result<GradedElement<S>, CoeffError> {
    a.multiply(b)
}

pub fn involution_c<S: Scalar>(a: &GradedElement<S>) -> GradedElement<S> {
    a.involution_c()
}

/// Exponent change of v_n when rewriting an unhatted monomial in hatted
/// coordinates (no degree shift).
fn hatted_vn_exp(n: u32, e: &[i32]) -> i64 {
    let t = (1i64 << n) - 1;
    let mut b = e[n as usize - 1] as i64;
    for (k, &ek) in e.iter().enumerate().take(n as usize - 1) {
        b += ek as i64 * ((1i64 << (k + 1)) - 1) * t;
    }
    b
}

/// Rewrite in hatted coordinates, v_k = v-hat_k v_n^{(2^k-1)(2^n-1)}.
pub fn to_hatted<S: Scalar>(a: &GradedElement<S>) -> GradedElement<S> {
    assert_eq!(a.ring().coords, Coords::Unhatted);
    let n = a.ring().height;
    let ring = RingDescriptor { coords: Coords::Hatted, vn_inverted: true, ..a.ring() };
    a.map_monomials(ring, |m| {
        let mut e = *m;
        e[n as usize - 1] = hatted_vn_exp(n, m) as i32;
        e
    })
}

/// Inverse of `to_hatted`; needs v_n inverted in the target.
pub fn to_unhatted<S: Scalar>(a: &GradedElement<S>) -> GradedElement<S> {
    assert_eq!(a.ring().coords, Coords::Hatted);
    let n = a.ring().height;
    let t = (1i64 << n) - 1;
    let ring = RingDescriptor { coords: Coords::Unhatted, vn_inverted: true, ..a.ring() };
    a.map_monomials(ring, |m| {
        let mut e = *m;
        let mut b = m[n as usize - 1] as i64;
        for (k, &ek) in m.iter().enumerate().take(n as usize - 1) {
            b -= ek as i64 * ((1i64 << (k + 1)) - 1) * t;
        }
        e[n as usize - 1] = b as i32;
        e
    })
}

/// The hat shift z -> z v_n^{k(2^n-1)} for z of degree 2k, landing in
/// hatted coordinates.
pub fn hat<S: Scalar>(a: &GradedElement<S>, degree2k: i64) -> Result<GradedElement<S>, CoeffError> {
    if degree2k % 2 != 0 {
        return Err(CoeffError::OddDegree);
    }
    if !a.is_zero() {
        let d = a.degree_of()?;
        if d != degree2k {
            return Err(CoeffError::DegreeMismatch);
        }
    }
    let n = a.ring().height;
    let shift = (degree2k / 2) * ((1i64 << n) - 1);
    let h = match a.ring().coords {
        Coords::Unhatted => to_hatted(a),
        Coords::Hatted => a.clone(),
    };
    Ok(h.mul_monomial(&Monomial::generator(n as usize, n as usize - 1, shift as i32)))
}

/// Membership data for I_k = (2, v-hat_1, .., v-hat_{k-1}), I_0 = (0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdealIk {
    pub k: u32,
}

/// Canonical representative modulo I_k in hatted coordinates.
pub fn reduce_mod_ik<S: Scalar>(a: &GradedElement<S>, ideal: IdealIk) -> GradedElement<S> {
    assert_eq!(a.ring().coords, Coords::Hatted);
    let k = ideal.k;
    if k == 0 {
        return a.clone();
    }
    let n = a.ring().height;
    if k > n {
        // v-hat_n is a unit, so I_{n+1} is the whole ring.
        return GradedElement::zero(a.ring());
    }
    let mut r = GradedElement::zero(a.ring());
    for (m, c) in a.terms() {
        let v = c.valuation2().expect("nonzero");
        assert!(v >= 0, "reduction needs 2-integral coefficients");
        if v > 0 {
            continue;
        }
        if m.iter().take(k as usize - 1).any(|&e| e > 0) {
            continue;
        }
        r.add_term(m.clone(), S::one());
    }
    r
}

/// I-adic order of a hatted monomial term with respect to I_n:
/// v2(coefficient) plus the total v-hat_1..v-hat_{n-1} exponent.
pub fn i_order<S: Scalar>(m: &Monomial, c: &S) -> i64 {
    let n = m.len();
    c.valuation2().unwrap_or(i64::MAX / 4) + m.iter().take(n - 1).map(|&e| e as i64).sum::<i64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::TwoLocalNumber as Q;

    #[test]
    fn degrees() {
        let r = RingDescriptor::unhatted(2).with_inverted(true);
        let v2 = Elem::vn(r, 1);
        assert_eq!(v2.degree_of(), Ok(-6));
        assert_eq!(v2.mul(&v2).degree_of(), Ok(-12));
        assert!(v2.mul(&Elem::vn(r, -1)) == Elem::one(r));
        let h = RingDescriptor::hatted(2);
        assert_eq!(Elem::gen(h, 0, 1).degree_of(), Ok(16));
        assert_eq!(Elem::one(h).degree_of(), Ok(0));
        assert_eq!(Elem::zero(h).degree_of(), Err(CoeffError::ZeroElement));
        let mixed = Elem::one(h).add(&Elem::gen(h, 0, 1));
        assert_eq!(mixed.degree_of(), Err(CoeffError::NotHomogeneous));
    }

    #[test]
    fn involution() {
        let h = RingDescriptor::hatted(2);
        let vn = Elem::vn(h, 1);
        assert_eq!(vn.involution_c(), vn.neg());
        let v1 = Elem::gen(h, 0, 1);
        assert_eq!(v1.involution_c(), v1);
        let x = v1.mul(&Elem::vn(h, 2));
        assert_eq!(x.involution_c(), x);
    }

    #[test]
    fn hat_examples() {
        for n in 1..=3u32 {
            let r = RingDescriptor::unhatted(n).with_inverted(true);
            let v1 = Elem::gen(r, 0, 1);
            let h1 = hat(&v1, -2).unwrap();
            let hr = RingDescriptor::hatted(n);
            if n > 1 {
                assert_eq!(h1, Elem::gen(hr, 0, 1));
            } else {
                assert_eq!(h1, Elem::one(hr));
            }
            let vn = Elem::vn(r, 1);
            let hn = hat(&vn, vk_degree(n)).unwrap();
            assert_eq!(hn, Elem::vn(hr, vhat_n_exponent(n) as i32));
            assert_eq!(hn.degree_of().unwrap(), -(2i64.pow(n) - 1) * (1 - lambda(n)));
        }
        let r = RingDescriptor::unhatted(2);
        assert_eq!(hat(&Elem::from_i64(r, 2), 0).unwrap(), Elem::from_i64(RingDescriptor::hatted(2), 2));
        assert_eq!(hat(&Elem::from_i64(r, 2), 1), Err(CoeffError::OddDegree));
    }

    #[test]
    fn reduction() {
        let h = RingDescriptor::hatted(2);
        let v1 = Elem::gen(h, 0, 1);
        let a = Elem::from_i64(h, 2).add(&v1).add(&v1.mul(&v1).mul(&Elem::vn(h, 1)));
        assert!(reduce_mod_ik(&a, IdealIk { k: 2 }).is_zero());
        let b = Elem::gen(h, 1, 1).scale(&Q::from_i64(3));
        assert_eq!(reduce_mod_ik(&b, IdealIk { k: 2 }), Elem::gen(h, 1, 1));
        assert_eq!(reduce_mod_ik(&a, IdealIk { k: 0 }), a);
    }
}
