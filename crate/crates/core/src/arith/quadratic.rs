use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::{int, ArithError, Rational};

/// An element `a + b*sqrt(d)` of a real quadratic field.
///
/// `d` is squarefree. Rational values are stored with `b = 0` and `d = 1`, so
/// they combine with any field. Two values are equal iff their components are
/// equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadraticValue {
    a: Rational,
    b: Rational,
    d: u64,
}

fn squarefree_split(d: u64) -> (u64, u64) {
    // d = f^2 * core
    let mut core = 1u64;
    let mut f = 1u64;
    let mut rest = d;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
        p += 1;
    }
    core *= rest;
    (f, core)
}

impl QuadraticValue {
    /// Builds `a + b*sqrt(d)`, pulling square factors out of `d`.
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self, ArithError> {
        if d == 0 {
            return Ok(Self::rational(a));
        }
        let (f, core) = squarefree_split(d);
        let b = b * int(f as i64);
        if core == 1 {
            return Ok(Self::rational(a + b));
        }
        Ok(Self::normalized(a, b, core))
    }

    fn normalized(a: Rational, b: Rational, d: u64) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            QuadraticValue { a, b, d }
        }
    }

    pub fn rational(a: Rational) -> Self {
        QuadraticValue {
            a,
            b: Rational::zero(),
            d: 1,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::rational(int(v))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `sqrt(d)` itself.
    pub fn sqrt(d: u64) -> Self {
        Self::new(Rational::zero(), Rational::one(), d).expect("d > 0")
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_part(&self) -> &Rational {
        &self.b
    }

    /// The squarefree radicand, `1` for rational values.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }

    /// Integer value, if this is a rational integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.is_rational() && self.a.is_integer()).then(|| self.a.to_integer())
    }

    fn field(&self, other: &Self) -> Result<u64, ArithError> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.d),
            (_, true) => Ok(self.d),
            _ if self.d == other.d => Ok(self.d),
            _ => Err(ArithError::MixedField(self.d, other.d)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.field(other)?;
        Ok(Self::normalized(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.field(other)?;
        Ok(Self::normalized(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.field(other)?;
        let dq = int(d as i64);
        let a = &self.a * &other.a + &self.b * &other.b * dq;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::normalized(a, b, d))
    }

    /// `a - b*sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        Self::normalized(self.a.clone(), -self.b.clone(), self.d)
    }

    /// `a^2 - d*b^2`, always rational.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * int(self.d as i64)
    }

    pub fn checked_recip(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::normalized(&self.a / &n, -&self.b / &n, self.d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        self.checked_mul(&other.checked_recip()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact sign of the real number `a + b*sqrt(d)`.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with d*b^2
        match (&self.a * &self.a).cmp(&(&self.b * &self.b * int(self.d as i64))) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// Exact comparison; fails only when the operands live in different fields.
    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering, ArithError> {
        Ok(self.checked_sub(other)?.signum().cmp(&0))
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }
}

fn sign_of(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialOrd for QuadraticValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_exact(other).ok()
    }
}

impl From<Rational> for QuadraticValue {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

impl From<i64> for QuadraticValue {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

// Operator impls panic on mixed fields; use the `checked_*` methods when
// operands may come from different schemes.
macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QuadraticValue> for &QuadraticValue {
            type Output = QuadraticValue;
            fn $method(self, rhs: &QuadraticValue) -> QuadraticValue {
                self.$checked(rhs).expect("mixed quadratic fields")
            }
        }
        impl $tr<QuadraticValue> for QuadraticValue {
            type Output = QuadraticValue;
            fn $method(self, rhs: QuadraticValue) -> QuadraticValue {
                (&self).$checked(&rhs).expect("mixed quadratic fields")
            }
        }
    };
}
forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for QuadraticValue {
    type Output = QuadraticValue;
    fn neg(self) -> QuadraticValue {
        QuadraticValue::normalized(-self.a, -self.b, self.d)
    }
}

impl Neg for &QuadraticValue {
    type Output = QuadraticValue;
    fn neg(self) -> QuadraticValue {
        -self.clone()
    }
}

impl std::iter::Sum for QuadraticValue {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(QuadraticValue::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for QuadraticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let surd = |f: &mut fmt::Formatter<'_>, b: &Rational| {
            if b.is_one() {
                write!(f, "sqrt({})", self.d)
            } else {
                write!(f, "{}*sqrt({})", b, self.d)
            }
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-")?;
            }
            return surd(f, &self.b.abs());
        }
        write!(f, "{}", self.a)?;
        write!(f, "{}", if self.b.is_negative() { "-" } else { "+" })?;
        surd(f, &self.b.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as a quadratic value (expected e.g. `3`, `-1/2`, `-1/2+1/2*sqrt(13)`)")]
pub struct QvParseError(pub String);

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

impl FromStr for QuadraticValue {
    type Err = QvParseError;

    /// Accepts `q`, `q*sqrt(d)`, `sqrt(d)` and `q +/- q*sqrt(d)` with rational `q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || QvParseError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = t.find("sqrt(") else {
            return parse_rational(&t).map(Self::rational).ok_or_else(err);
        };
        let close = t[pos..].find(')').map(|i| i + pos).ok_or_else(err)?;
        if close + 1 != t.len() {
            return Err(err());
        }
        let d: u64 = t[pos + 5..close].parse().map_err(|_| err())?;
        let head = &t[..pos];
        // split head into rational part and coefficient of the surd
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (a_str, coef_str) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("0", head),
        };
        let a = parse_rational(a_str).ok_or_else(err)?;
        let coef_str = coef_str.strip_suffix('*').unwrap_or(coef_str);
        let b = match coef_str {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            c => parse_rational(c.strip_prefix('+').unwrap_or(c)).ok_or_else(err)?,
        };
        Self::new(a, b, d).map_err(|_| err())
    }
}

#[derive(Serialize, Deserialize)]
struct QvWire {
    a: String,
    b: String,
    d: u64,
}

impl Serialize for QuadraticValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        QvWire {
            a: self.a.to_string(),
            b: self.b.to_string(),
            d: self.d,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadraticValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let w = QvWire::deserialize(deserializer)?;
        let a = parse_rational(&w.a).ok_or_else(|| D::Error::custom("bad rational `a`"))?;
        let b = parse_rational(&w.b).ok_or_else(|| D::Error::custom("bad rational `b`"))?;
        QuadraticValue::new(a, b, w.d.max(1)).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn golden() -> (QuadraticValue, QuadraticValue) {
        let r = QuadraticValue::new(rat(-1, 2), rat(1, 2), 5).unwrap();
        (r.clone(), r.conjugate())
    }

    #[test]
    fn squarefree_normalization() {
        let x = QuadraticValue::new(int(1), int(1), 12).unwrap();
        assert_eq!(x.radicand(), 3);
        assert_eq!(x.surd_part(), &int(2));
        let y = QuadraticValue::new(int(1), int(3), 9).unwrap();
        assert_eq!(y, QuadraticValue::from_int(10));
    }

    #[test]
    fn norm_of_conjugates() {
        let x = QuadraticValue::new(rat(3, 2), rat(-5, 7), 13).unwrap();
        let prod = &x * &x.conjugate();
        assert!(prod.is_rational());
        assert_eq!(prod.as_rational().unwrap(), &x.norm());
    }

    #[test]
    fn golden_ratio_products() {
        let (r, s) = golden();
        assert_eq!(&r * &s, QuadraticValue::from_int(-1));
        assert_eq!(&r + &s, QuadraticValue::from_int(-1));
        assert!(r.is_positive());
        assert!(s.is_negative());
        assert!((s.clone() + QuadraticValue::one()).is_negative());
    }

    #[test]
    fn mixed_fields_rejected() {
        let x = QuadraticValue::sqrt(2);
        let y = QuadraticValue::sqrt(3);
        assert_eq!(x.checked_add(&y), Err(ArithError::MixedField(2, 3)));
        assert!(x.checked_add(&QuadraticValue::from_int(4)).is_ok());
    }

    #[test]
    fn parse_and_display() {
        let x: QuadraticValue = "-1/2+1/2*sqrt(13)".parse().unwrap();
        assert_eq!(x, QuadraticValue::new(rat(-1, 2), rat(1, 2), 13).unwrap());
        assert_eq!(x.to_string().parse::<QuadraticValue>().unwrap(), x);
        let y: QuadraticValue = "-sqrt(5)".parse().unwrap();
        assert_eq!(y, -QuadraticValue::sqrt(5));
        assert_eq!("7/3".parse::<QuadraticValue>().unwrap(), QuadraticValue::rational(rat(7, 3)));
        assert!("sqrt(5".parse::<QuadraticValue>().is_err());
    }

    #[test]
    fn recip_and_order() {
        let (r, _) = golden();
        let inv = r.checked_recip().unwrap();
        assert!((&inv * &r).is_one());
        assert!(r < QuadraticValue::one());
        assert!(QuadraticValue::zero().checked_recip().is_err());
    }

    #[test]
    fn json_wire_format() {
        let x = QuadraticValue::new(rat(-1, 2), rat(1, 2), 13).unwrap();
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"a":"-1/2","b":"1/2","d":13}"#);
        let back: QuadraticValue = serde_json::from_str(&j).unwrap();
        assert_eq!(back, x);
    }
}
