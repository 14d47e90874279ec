use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{int, ArithError, QuadraticValue, Rational};

/// The closed symbol universe. `L` stands for the co-valency (written `l`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symbol {
    K,
    L,
    R,
    S,
    M,
}

impl Symbol {
    pub const ALL: [Symbol; 5] = [Symbol::K, Symbol::L, Symbol::R, Symbol::S, Symbol::M];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        match self {
            Symbol::K => 'k',
            Symbol::L => 'l',
            Symbol::R => 'r',
            Symbol::S => 's',
            Symbol::M => 'm',
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        Some(match c {
            'k' => Symbol::K,
            'l' => Symbol::L,
            'r' => Symbol::R,
            's' => Symbol::S,
            'm' => Symbol::M,
            _ => return None,
        })
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Exponent vector over [`Symbol::ALL`], ordered by total degree then lex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u8; 5]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; 5])
    }

    pub fn var(s: Symbol) -> Self {
        let mut e = [0; 5];
        e[s.index()] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, s: Symbol) -> u8 {
        self.0[s.index()]
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; 5]
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0) {
            *x += y;
        }
        Monomial(e)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0).all(|(&a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0) {
            *x -= y;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over `Q`. Zero coefficients are never stored, so the
/// zero polynomial is the empty map and equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_int(v: i64) -> Self {
        Self::constant(int(v))
    }

    pub fn var(s: Symbol) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(s), Rational::one());
        p
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Constant value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, s: Symbol) -> u8 {
        self.terms.keys().map(|m| m.exp(s)).max().unwrap_or(0)
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.degree_in(s) > 0
    }

    /// Symbols occurring in the polynomial, in canonical order.
    pub fn symbols(&self) -> Vec<Symbol> {
        Symbol::ALL.into_iter().filter(|&s| self.contains(s)).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficients as a polynomial in `s`: entry `i` multiplies `s^i`.
    pub fn coefficients_in(&self, s: Symbol) -> Vec<MultiPoly> {
        let deg = self.degree_in(s) as usize;
        let mut out = vec![MultiPoly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let mut rest = *m;
            let e = rest.0[s.index()];
            rest.0[s.index()] = 0;
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Rebuilds `sum_i coeffs[i] * s^i`.
    pub fn from_coefficients(s: Symbol, coeffs: &[MultiPoly]) -> Self {
        let x = MultiPoly::var(s);
        let mut acc = MultiPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => Self::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Integer coefficients with unit content and positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut factor = Rational::new(den, num);
        if self.leading_coefficient().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Evaluates at an assignment; every occurring symbol must be assigned.
    pub fn eval(&self, assignment: &BTreeMap<Symbol, QuadraticValue>) -> Result<QuadraticValue, ArithError> {
        let mut acc = QuadraticValue::zero();
        for (m, c) in &self.terms {
            let mut t = QuadraticValue::rational(c.clone());
            for s in Symbol::ALL {
                let e = m.exp(s);
                if e == 0 {
                    continue;
                }
                let v = assignment.get(&s).ok_or(ArithError::MissingSymbol(s))?;
                t = t.checked_mul(&v.pow(e as u32))?;
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }

    /// Composition; every occurring symbol must be mapped.
    pub fn substitute(&self, map: &BTreeMap<Symbol, MultiPoly>) -> Result<MultiPoly, ArithError> {
        if let Some(s) = self.symbols().into_iter().find(|s| !map.contains_key(s)) {
            return Err(ArithError::MissingSymbol(s));
        }
        Ok(self.substitute_partial(map))
    }

    /// Composition leaving unmapped symbols in place.
    pub fn substitute_partial(&self, map: &BTreeMap<Symbol, MultiPoly>) -> MultiPoly {
        let mut powers: BTreeMap<(Symbol, u8), MultiPoly> = BTreeMap::new();
        let mut acc = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut kept = Monomial::one();
            let mut t = MultiPoly::constant(c.clone());
            for s in Symbol::ALL {
                let e = m.exp(s);
                if e == 0 {
                    continue;
                }
                match map.get(&s) {
                    Some(img) => {
                        let pw = powers.entry((s, e)).or_insert_with(|| img.pow(e as u32));
                        t = &t * &*pw;
                    }
                    None => kept.0[s.index()] = e,
                }
            }
            if !kept.is_one() {
                t = &t * &MultiPoly::term(kept, Rational::one());
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Largest monomial dividing every term (`1` for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut e = first.0;
        for m in it {
            for (x, y) in e.iter_mut().zip(m.0) {
                *x = (*x).min(y);
            }
        }
        Monomial(e)
    }

    /// Divides every term by `m`, which must divide all of them.
    pub fn div_monomial(&self, m: &Monomial) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (t, c) in &self.terms {
            assert!(m.divides(t), "monomial does not divide every term");
            out.terms.insert(t.div(m), c.clone());
        }
        out
    }

    /// `Some(1)` if every coefficient is positive, `Some(-1)` if every one is
    /// negative, `None` otherwise (including the zero polynomial).
    pub fn uniform_sign(&self) -> Option<i8> {
        if self.is_zero() {
            return None;
        }
        if self.terms.values().all(|c| c.is_positive()) {
            Some(1)
        } else if self.terms.values().all(|c| c.is_negative()) {
            Some(-1)
        } else {
            None
        }
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        let (lm, lc) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(lm);
            let qc = c / lc;
            let t = MultiPoly::term(qm, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }
}

impl From<Symbol> for MultiPoly {
    fn from(s: Symbol) -> Self {
        MultiPoly::var(s)
    }
}

impl From<i64> for MultiPoly {
    fn from(v: i64) -> Self {
        MultiPoly::from_int(v)
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $method:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$method(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(MultiPoly::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(mag.to_string());
            }
            for s in Symbol::ALL {
                match m.exp(s) {
                    0 => {}
                    1 => factors.push(s.to_string()),
                    e => factors.push(format!("{s}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial `{input}` at byte {pos}: {msg}")]
pub struct PolyParseError {
    pub input: String,
    pub pos: usize,
    pub msg: &'static str,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    input: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &'static str) -> PolyParseError {
        PolyParseError {
            input: self.input.to_string(),
            pos: self.pos,
            msg,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly, PolyParseError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc + t } else { acc - t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, PolyParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    let c = d
                        .constant_value()
                        .filter(|c| !c.is_zero())
                        .ok_or_else(|| self.err("division only by nonzero constants"))?;
                    acc = acc.scale(&c.recip());
                }
                // implicit multiplication: `2r`, `r(1+s)`
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => acc = acc * self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly, PolyParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = self.input[start..self.pos]
                .parse()
                .map_err(|_| self.err("expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, PolyParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let v: BigInt = self.input[start..self.pos].parse().map_err(|_| self.err("bad integer"))?;
                Ok(MultiPoly::constant(Rational::from_integer(v)))
            }
            Some(c) => match Symbol::from_char(c as char) {
                Some(s) => {
                    self.pos += 1;
                    Ok(MultiPoly::var(s))
                }
                None => Err(self.err("unknown symbol")),
            },
            None => Err(self.err("unexpected end of input")),
        }
    }
}

impl FromStr for MultiPoly {
    type Err = PolyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
            input: s,
        };
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    pub(crate) fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn assign(vals: &[(Symbol, QuadraticValue)]) -> BTreeMap<Symbol, QuadraticValue> {
        vals.iter().cloned().collect()
    }

    #[test]
    fn eval_petersen_k_plus_rs() {
        let a = assign(&[(Symbol::K, 3.into()), (Symbol::R, 1.into()), (Symbol::S, (-2).into())]);
        assert_eq!(p("k + r*s").eval(&a).unwrap(), QuadraticValue::one());
    }

    #[test]
    fn eval_zero_polynomial() {
        assert!(MultiPoly::zero().eval(&BTreeMap::new()).unwrap().is_zero());
    }

    #[test]
    fn eval_conjugate_surds() {
        let r = QuadraticValue::new(rat(-1, 2), rat(1, 2), 5).unwrap();
        let a = assign(&[(Symbol::R, r.clone()), (Symbol::S, r.conjugate())]);
        assert_eq!(p("1 + r + s + r*s").eval(&a).unwrap(), QuadraticValue::from_int(-1));
    }

    #[test]
    fn eval_errors() {
        let a = assign(&[(Symbol::R, QuadraticValue::sqrt(2)), (Symbol::S, QuadraticValue::sqrt(3))]);
        assert_eq!(p("k").eval(&a), Err(ArithError::MissingSymbol(Symbol::K)));
        assert_eq!(p("r*s").eval(&a), Err(ArithError::MixedField(2, 3)));
    }

    #[test]
    fn substitution_examples() {
        let conf: BTreeMap<_, _> = [(Symbol::K, p("2r + 2r^2")), (Symbol::L, p("2r+2r^2"))].into();
        assert!(p("k - l").substitute(&conf).unwrap().is_zero());
        let id: BTreeMap<_, _> = [(Symbol::K, p("k"))].into();
        assert_eq!(p("k").substitute(&id).unwrap(), p("k"));
        let clb: BTreeMap<_, _> = [(Symbol::K, p("r(3+r)")), (Symbol::R, p("r"))].into();
        assert!(p("k - r(3+r)").substitute(&clb).unwrap().is_zero());
        assert_eq!(
            p("k + s").substitute(&id),
            Err(ArithError::MissingSymbol(Symbol::S))
        );
    }

    #[test]
    fn parse_display_roundtrip() {
        for s in ["k*r + l - 3/2*s", "(1+r)*(1+s)", "-k^2 + 2", "0", "r^3*m - 7"] {
            let a = p(s);
            assert_eq!(p(&a.to_string()), a, "{s}");
        }
        assert_eq!(p("(1+r)(1+s)"), p("1 + r + s + r*s"));
        assert!("k + x".parse::<MultiPoly>().is_err());
        assert!("k + (r".parse::<MultiPoly>().is_err());
    }

    #[test]
    fn exact_division() {
        let a = p("(k - r)*(1 + s)*(k + r*s)");
        assert_eq!(a.div_exact(&p("k - r")).unwrap(), p("(1+s)*(k+r*s)"));
        assert!(p("k + r + s + r*s").div_exact(&p("1 + r")).is_none());
        assert!(MultiPoly::zero().div_exact(&p("k")).unwrap().is_zero());
    }

    #[test]
    fn coefficient_split() {
        let a = p("k*r^2 + 3*r - s + 1");
        let cs = a.coefficients_in(Symbol::R);
        assert_eq!(cs, vec![p("1 - s"), p("3"), p("k")]);
        assert_eq!(MultiPoly::from_coefficients(Symbol::R, &cs), a);
    }

    #[test]
    fn primitive_normalization() {
        assert_eq!(p("-2/3*k + 4/3").primitive(), p("k - 2"));
        assert_eq!(p("6r").monic(), p("r"));
    }

    #[test]
    fn term_order_is_degree_then_lex() {
        let a = p("k + r^2 + 1");
        assert_eq!(a.leading_term().unwrap().0, &Monomial([0, 0, 2, 0, 0]));
        let b = p("r*s + k*s");
        assert_eq!(b.leading_term().unwrap().0, &Monomial([1, 0, 0, 1, 0]));
    }
}
