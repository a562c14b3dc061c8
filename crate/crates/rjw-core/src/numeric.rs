//! Exact scalars: the 2-local rationals and plain rationals for the log stage.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("reduced denominator is even")]
    EvenDenominator,
    #[error("value is not a 2-local unit")]
    NotAUnit,
    #[error("division by zero")]
    DivisionByZero,
}

/// Plain rational, used where denominators may contain powers of 2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

/// A rational number with odd positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoLocalNumber(BigRational);

pub fn normalize(num: BigInt, den: BigInt) -> Result<TwoLocalNumber, NumericError> {
    if den.is_zero() {
        return Err(NumericError::DivisionByZero);
    }
    TwoLocalNumber::from_rational(BigRational::new(num, den))
}

fn v2_int(x: &BigInt) -> Option<u64> {
    if x.is_zero() {
        None
    } else {
        x.magnitude().trailing_zeros()
    }
}

impl TwoLocalNumber {
    pub fn from_rational(q: BigRational) -> Result<Self, NumericError> {
        if q.denom().is_even() {
            Err(NumericError::EvenDenominator)
        } else {
            Ok(TwoLocalNumber(q))
        }
    }

    pub fn from_i64(v: i64) -> Self {
        TwoLocalNumber(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_int(v: BigInt) -> Self {
        TwoLocalNumber(BigRational::from_integer(v))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    /// Exponent of 2 in the numerator; `None` stands for +infinity.
    pub fn valuation2(&self) -> Option<u64> {
        v2_int(self.0.numer())
    }

    pub fn is_unit(&self) -> bool {
        self.valuation2() == Some(0)
    }

    /// Reciprocal inside Z_(2); only units qualify.
    pub fn invert(&self) -> Result<Self, NumericError> {
        match self.valuation2() {
            None => Err(NumericError::DivisionByZero),
            Some(0) => Ok(TwoLocalNumber(self.0.recip())),
            Some(_) => Err(NumericError::NotAUnit),
        }
    }

    /// Exact quotient when `other` divides `self` in Z_(2).
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        let vo = other.valuation2()?;
        match self.valuation2() {
            None => Some(Self::zero()),
            Some(vs) if vs >= vo => Some(TwoLocalNumber(&self.0 / &other.0)),
            Some(_) => None,
        }
    }

    /// Residue modulo 2 (0 or 1).
    pub fn mod2(&self) -> u8 {
        if self.valuation2() == Some(0) {
            1
        } else {
            0
        }
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn num_string(&self) -> String {
        use alloc::string::ToString;
        self.0.numer().to_string()
    }

    pub fn den_string(&self) -> String {
        use alloc::string::ToString;
        self.0.denom().to_string()
    }
}

fn to_u128(x: &BigInt) -> Option<u128> {
    let mut it = x.magnitude().iter_u64_digits();
    match it.len() {
        0 => Some(0),
        1 => Some(it.next().unwrap() as u128),
        2 => {
            let lo = it.next().unwrap() as u128;
            Some(lo | (it.next().unwrap() as u128) << 64)
        }
        _ => None,
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            core::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            core::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Non-negative gcd, with a native path for operands below 2^128.
fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    if b.is_one() || a.is_one() {
        return BigInt::one();
    }
    match (to_u128(a), to_u128(b)) {
        (Some(x), Some(y)) if x <= u64::MAX as u128 && y <= u64::MAX as u128 => BigInt::from(gcd_u64(x as u64, y as u64)),
        (Some(x), Some(y)) => BigInt::from(gcd_u128(x, y)),
        _ => a.gcd(b),
    }
}

fn rat_mul(x: &BigRational, y: &BigRational) -> BigRational {
    let (a, b, c, d) = (x.numer(), x.denom(), y.numer(), y.denom());
    if a.is_zero() || c.is_zero() {
        return BigRational::zero();
    }
    if b.is_one() && d.is_one() {
        return BigRational::new_raw(a * c, BigInt::one());
    }
    let g1 = gcd(a, d);
    let g2 = gcd(c, b);
    let (num, den) = if g1.is_one() && g2.is_one() {
        (a * c, b * d)
    } else {
        ((a / &g1) * (c / &g2), (b / &g2) * (d / &g1))
    };
    BigRational::new_raw(num, den)
}

fn rat_add(x: &BigRational, y: &BigRational) -> BigRational {
    let (a, b, c, d) = (x.numer(), x.denom(), y.numer(), y.denom());
    if a.is_zero() {
        return y.clone();
    }
    if c.is_zero() {
        return x.clone();
    }
    if b == d {
        let n = a + c;
        if b.is_one() {
            return BigRational::new_raw(n, BigInt::one());
        }
        if n.is_zero() {
            return BigRational::zero();
        }
        let g = gcd(&n, b);
        return if g.is_one() { BigRational::new_raw(n, b.clone()) } else { BigRational::new_raw(n / &g, b / &g) };
    }
    let g = gcd(b, d);
    if g.is_one() {
        return BigRational::new_raw(a * d + c * b, b * d);
    }
    let bg = b / &g;
    let dg = d / &g;
    let t = a * &dg + c * &bg;
    if t.is_zero() {
        return BigRational::zero();
    }
    let g2 = gcd(&t, &g);
    if g2.is_one() {
        BigRational::new_raw(t, bg * d)
    } else {
        BigRational::new_raw(t / &g2, bg * (d / &g2))
    }
}

macro_rules! scalar_ops {
    ($t:ident) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                $t(rat_add(&self.0, &rhs.0))
            }
        }
        impl<'a> Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, rhs: &'a $t) -> $t {
                $t(rat_add(&self.0, &rhs.0))
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                $t(rat_add(&self.0, &-rhs.0))
            }
        }
        impl<'a> Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, rhs: &'a $t) -> $t {
                $t(rat_add(&self.0, &-&rhs.0))
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                $t(rat_mul(&self.0, &rhs.0))
            }
        }
        impl<'a> Mul<&'a $t> for &'a $t {
            type Output = $t;
            fn mul(self, rhs: &'a $t) -> $t {
                $t(rat_mul(&self.0, &rhs.0))
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                $t(-self.0)
            }
        }
        impl<'a> Neg for &'a $t {
            type Output = $t;
            fn neg(self) -> $t {
                $t(-&self.0)
            }
        }
        impl Zero for $t {
            fn zero() -> Self {
                $t(BigRational::zero())
            }
            fn is_zero(&self) -> bool {
                self.0.is_zero()
            }
        }
        impl One for $t {
            fn one() -> Self {
                $t(BigRational::one())
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_integer() {
                    write!(f, "{}", self.0.numer())
                } else {
                    write!(f, "{}/{}", self.0.numer(), self.0.denom())
                }
            }
        }
        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(self, f)
            }
        }
    };
}

scalar_ops!(TwoLocalNumber);
scalar_ops!(Rational);

impl Rational {
    pub fn from_integer(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
}

pub fn arith(op: ArithOp, a: &TwoLocalNumber, b: Option<&TwoLocalNumber>) -> TwoLocalNumber {
    match op {
        ArithOp::Add => a + b.expect("add takes two operands"),
        ArithOp::Mul => a * b.expect("mul takes two operands"),
        ArithOp::Neg => -a,
    }
}

/// Coefficient scalars usable in graded elements and series.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + Ord
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;
    fn to_rational(&self) -> BigRational;
    fn from_rational(q: BigRational) -> Option<Self>;
    /// Multiplicative inverse in this scalar ring, if one exists.
    fn try_inverse(&self) -> Option<Self>;
    fn valuation2(&self) -> Option<i64>;
}

impl Scalar for TwoLocalNumber {
    fn from_i64(v: i64) -> Self {
        TwoLocalNumber::from_i64(v)
    }
    fn to_rational(&self) -> BigRational {
        self.0.clone()
    }
    fn from_rational(q: BigRational) -> Option<Self> {
        TwoLocalNumber::from_rational(q).ok()
    }
    fn try_inverse(&self) -> Option<Self> {
        self.invert().ok()
    }
    fn valuation2(&self) -> Option<i64> {
        TwoLocalNumber::valuation2(self).map(|v| v as i64)
    }
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v)
    }
    fn to_rational(&self) -> BigRational {
        self.0.clone()
    }
    fn from_rational(q: BigRational) -> Option<Self> {
        Some(Rational(q))
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn valuation2(&self) -> Option<i64> {
        let n = v2_int(self.0.numer())? as i64;
        let d = v2_int(self.0.denom()).unwrap_or(0) as i64;
        Some(n - d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> TwoLocalNumber {
        normalize(BigInt::from(n), BigInt::from(d)).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            normalize(BigInt::from(6), BigInt::from(4)),
            Err(NumericError::EvenDenominator)
        );
        assert_eq!(q(6, 3), TwoLocalNumber::from_i64(2));
        let x = q(-5, -15);
        assert_eq!((x.num_string(), x.den_string()), ("1".into(), "3".into()));
    }

    #[test]
    fn arith_examples() {
        assert_eq!(arith(ArithOp::Add, &q(1, 3), Some(&q(1, 5))), q(8, 15));
        assert_eq!(arith(ArithOp::Mul, &q(2, 1), Some(&q(1, 3))), q(2, 3));
        assert!(arith(ArithOp::Neg, &TwoLocalNumber::zero(), None).is_zero());
    }

    #[test]
    fn valuation_and_inverse() {
        assert_eq!(q(12, 5).valuation2(), Some(2));
        assert_eq!(q(1, 3).valuation2(), Some(0));
        assert_eq!(TwoLocalNumber::zero().valuation2(), None);
        assert_eq!(q(3, 5).invert(), Ok(q(5, 3)));
        assert_eq!(q(2, 1).invert(), Err(NumericError::NotAUnit));
        assert_eq!(q(-1, 1).invert(), Ok(q(-1, 1)));
        assert_eq!(TwoLocalNumber::zero().invert(), Err(NumericError::DivisionByZero));
    }
}
