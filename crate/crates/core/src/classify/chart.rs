//! Positive coordinates on the primitive region, and proofs that a
//! polynomial in `(k, l, r, s)` cannot vanish there.
//!
//! With `t = -1 - s` and `c = k + rs`, the primitive conditions `r > 0`,
//! `s < -1`, `k + rs > 0` say exactly that `c, r, t > 0`. Two charts follow:
//!
//! * chart A adds `b = l - 1 + rs >= 0` (a feasibility inequality) and keeps
//!   `l` independent: `k = c + r + rt`, `l = 1 + r + rt + b`;
//! * chart C uses the orthogonality relation `l (k + rs) = -k (1 + r)(1 + s)`
//!   to eliminate `l`: `l = k (1 + r) t / c`, cleared by a power of `c`.
//!
//! A polynomial whose chart image has all coefficients of one sign is
//! nonzero on the whole region. Chart coordinates live in the symbol slots
//! `c -> k`, `b -> l`, `r -> r`, `t -> s`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{sieve_nonzero, Monomial, MultiPoly, SieveSet, Symbol, UCertificate};

pub const C: Symbol = Symbol::K;
pub const B: Symbol = Symbol::L;
pub const T: Symbol = Symbol::S;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    A,
    C,
}

fn v(s: Symbol) -> MultiPoly {
    MultiPoly::var(s)
}

/// `k = c + r + r t` in chart coordinates.
pub fn chart_k() -> MultiPoly {
    &(&v(C) + &v(Symbol::R)) + &(&v(Symbol::R) * &v(T))
}

/// `s = -1 - t`.
pub fn chart_s() -> MultiPoly {
    &MultiPoly::from_int(-1) - &v(T)
}

/// `(k, l, r, s)` as chart-C rational functions: numerators over `c^0` except
/// `l`, whose value is `l_num / c`.
pub fn chart_c_l_numerator() -> MultiPoly {
    &(&chart_k() * &(&MultiPoly::one() + &v(Symbol::R))) * &v(T)
}

impl Chart {
    /// Image of `p` in this chart. For chart C the result is multiplied by
    /// `c^deg_l(p)`, which is positive.
    pub fn image(self, p: &MultiPoly) -> MultiPoly {
        let mut map = BTreeMap::new();
        map.insert(Symbol::K, chart_k());
        map.insert(Symbol::S, chart_s());
        match self {
            Chart::A => {
                let l = &(&(&MultiPoly::one() + &v(Symbol::R)) + &(&v(Symbol::R) * &v(T))) + &v(B);
                map.insert(Symbol::L, l);
                p.substitute_partial(&map)
            }
            Chart::C => {
                let coeffs = p.coefficients_in(Symbol::L);
                let d = coeffs.len() - 1;
                let l_num = chart_c_l_numerator();
                let mut acc = MultiPoly::zero();
                for (j, cj) in coeffs.iter().enumerate() {
                    if cj.is_zero() {
                        continue;
                    }
                    let term = &(&cj.substitute_partial(&map) * &l_num.pow(j as u32)) * &v(C).pow((d - j) as u32);
                    acc = &acc + &term;
                }
                acc
            }
        }
    }

    /// Sign of an image polynomial on the chart, when it is provably constant.
    pub fn definite_sign(self, image: &MultiPoly) -> Option<i8> {
        let sign = image.uniform_sign()?;
        match self {
            Chart::C => Some(sign),
            // b may be zero, so some term must avoid it
            Chart::A => image.terms().any(|(m, _)| m.exp(B) == 0).then_some(sign),
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::A => "A",
            Chart::C => "C",
        })
    }
}

/// Renders a chart polynomial with its own variable names.
pub fn chart_display(p: &MultiPoly) -> String {
    p.to_string().replace('k', "c").replace('l', "b").replace('s', "t")
}

/// Why a polynomial cannot vanish on the primitive region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum NonzeroProof {
    /// `p` is a constant multiple of a product of sieve members.
    Sieve(UCertificate),
    /// The chart image of `p` has coefficients of a single sign.
    Chart { chart: Chart, sign: i8, image: MultiPoly },
}

impl NonzeroProof {
    /// Re-derives the claim from scratch.
    pub fn verify(&self, p: &MultiPoly, u: &SieveSet) -> bool {
        match self {
            NonzeroProof::Sieve(cert) => {
                cert.verifies(p) && cert.factors.iter().all(|(f, _)| u.polys().any(|m| m == f))
            }
            NonzeroProof::Chart { chart, sign, image } => {
                &chart.image(p) == image && chart.definite_sign(image) == Some(*sign)
            }
        }
    }
}

pub fn certify_nonzero(p: &MultiPoly, u: &SieveSet) -> Option<NonzeroProof> {
    if p.is_zero() {
        return None;
    }
    if let Ok(Some(cert)) = sieve_nonzero(p, u) {
        return Some(NonzeroProof::Sieve(cert));
    }
    for chart in [Chart::A, Chart::C] {
        let image = chart.image(p);
        if let Some(sign) = chart.definite_sign(&image) {
            return Some(NonzeroProof::Chart { chart, sign, image });
        }
    }
    None
}

/// Drops the monomial content (all chart coordinates are positive) and
/// rescales to integer coefficients with positive leading coefficient.
pub fn normalize_positive(p: &MultiPoly) -> MultiPoly {
    let m: Monomial = p.monomial_content();
    p.div_monomial(&m).primitive()
}
