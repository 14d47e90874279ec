//! Exact scalars and polynomials.
//!
//! Everything in this crate is computed exactly: rationals are arbitrary
//! precision, irrational eigenvalues live in a single real quadratic field
//! `Q(sqrt d)`, and symbolic character tables are sparse polynomials over `Q`
//! in the fixed symbol set `{k, l, r, s, m}`.

mod poly;
mod quadratic;
mod sieve;

pub use poly::{Monomial, MultiPoly, PolyParseError, Symbol};
pub use quadratic::{QuadraticValue, QvParseError};
pub use sieve::{sieve_nonzero, SieveMember, SieveSet, UCertificate};

use num_bigint::BigInt;
use thiserror::Error;

/// Arbitrary precision rational number, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `num / den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("symbol `{0}` has no assigned value")]
    MissingSymbol(Symbol),
    #[error("values from Q(sqrt {0}) and Q(sqrt {1}) cannot be combined")]
    MixedField(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial cannot be certified nonzero")]
    ZeroInput,
}
